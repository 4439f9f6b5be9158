#include "ellipgamma/recognize.hpp"

#include <algorithm>
#include <cmath>

namespace ellipgamma {

namespace {

mpz_class dot(const IntegerMatrix& b, std::size_t i, std::size_t j) {
  mpz_class s = 0;
  for (std::size_t c = 0; c < b.cols(); ++c) s += b(i, c) * b(j, c);
  return s;
}

// Nearest integer to a / d for d > 0.
mpz_class round_div(const mpz_class& a, const mpz_class& d) {
  mpz_class q;
  const mpz_class num = 2 * a + d, den = 2 * d;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

// Integral LLL after Cohen: d[i] is the Gram determinant of the first i rows
// (d[0] = 1) and lambda(k, j) = d[j+1] mu_kj.
class IntegralLll {
 public:
  IntegralLll(IntegerMatrix b, const mpq_class& delta)
      : b_(std::move(b)), n_(b_.rows()), d_(n_ + 1), lambda_(n_, n_), a_(delta.get_num()), c_(delta.get_den()) {}

  IntegerMatrix run() {
    if (n_ == 0) return b_;
    d_[0] = 1;
    d_[1] = dot(b_, 0, 0);
    if (d_[1] == 0) throw Error(Errc::RankDeficient, "lll: zero basis vector");
    std::size_t k = 1, kmax = 0;
    while (k < n_) {
      if (k > kmax) {
        kmax = k;
        gram_schmidt_row(k);
      }
      reduce(k, k - 1);
      // Lovasz: d_{k+1} d_{k-1} >= delta d_k^2 - lambda_{k,k-1}^2
      const mpz_class& lam = lambda_(k, k - 1);
      if (c_ * d_[k + 1] * d_[k - 1] < a_ * d_[k] * d_[k] - c_ * lam * lam) {
        swap(k, kmax);
        if (k > 1) --k;
      } else {
        for (std::size_t l = k - 1; l-- > 0;) reduce(k, l);
        ++k;
      }
    }
    return b_;
  }

 private:
  void gram_schmidt_row(std::size_t k) {
    for (std::size_t j = 0; j <= k; ++j) {
      mpz_class u = dot(b_, k, j);
      for (std::size_t i = 0; i < j; ++i) u = (d_[i + 1] * u - lambda_(k, i) * lambda_(j, i)) / d_[i];
      if (j < k) {
        lambda_(k, j) = u;
      } else {
        if (u == 0) throw Error(Errc::RankDeficient, "lll: rows are linearly dependent");
        d_[k + 1] = u;
      }
    }
  }

  void reduce(std::size_t k, std::size_t l) {
    mpz_class twice = 2 * abs(lambda_(k, l));
    if (twice <= d_[l + 1]) return;
    const mpz_class q = round_div(lambda_(k, l), d_[l + 1]);
    for (std::size_t c = 0; c < b_.cols(); ++c) b_(k, c) -= q * b_(l, c);
    lambda_(k, l) -= q * d_[l + 1];
    for (std::size_t i = 0; i < l; ++i) lambda_(k, i) -= q * lambda_(l, i);
  }

  void swap(std::size_t k, std::size_t kmax) {
    for (std::size_t c = 0; c < b_.cols(); ++c) std::swap(b_(k, c), b_(k - 1, c));
    for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lambda_(k, j), lambda_(k - 1, j));
    const mpz_class lam = lambda_(k, k - 1);
    const mpz_class nb = (d_[k - 1] * d_[k + 1] + lam * lam) / d_[k];
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      const mpz_class t = lambda_(i, k);
      lambda_(i, k) = (d_[k + 1] * lambda_(i, k - 1) - lam * t) / d_[k];
      lambda_(i, k - 1) = (nb * t + lam * lambda_(i, k)) / d_[k + 1];
    }
    d_[k] = nb;
  }

  IntegerMatrix b_;
  std::size_t n_;
  std::vector<mpz_class> d_;
  IntegerMatrix lambda_;
  mpz_class a_, c_;
};

mpz_class content(const std::vector<mpz_class>& v) {
  mpz_class g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

mpz_class height(const std::vector<mpz_class>& v) {
  mpz_class h = 0;
  for (const auto& x : v) h = std::max(h, mpz_class(abs(x)));
  return h;
}

struct Candidate {
  std::vector<mpz_class> coeffs;
  BigReal residual;
  mpz_class norm2;
};

BigReal relation_residual(std::span<const BigComplex> values, const std::vector<mpz_class>& c, Precision prec) {
  BigComplex s(prec);
  BigReal scale(0L, prec);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (c[i] == 0) continue;
    const BigComplex term = values[i].with_prec(prec) * BigReal(c[i], prec);
    s += term;
    scale += abs(term);
  }
  if (scale.is_zero()) return BigReal(1L, prec);
  return abs(s) / scale;
}

RecognitionResult lindep_impl(std::span<const BigComplex> values, Precision prec, const mpz_class& bound,
                              RelationKind kind) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(Errc::InvalidArgument, "lindep: at least two values required");
  const int digits = bits_to_digits(prec);
  const BigReal scale = pow10(std::max(1, digits - 10), prec + 16);
  bool complex = false;
  for (const auto& v : values) {
    if (!v.im().is_zero()) complex = true;
  }
  const std::size_t extra = complex ? 2 : 1;
  IntegerMatrix m(n, n + extra);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1;
    m(i, n) = (values[i].re().with_prec(prec + 16) * scale).round_to_integer();
    if (complex) m(i, n + 1) = (values[i].im().with_prec(prec + 16) * scale).round_to_integer();
  }
  const IntegerMatrix red = lll(m);

  std::vector<Candidate> cands;
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<mpz_class> c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = red(r, i);
    const mpz_class g = content(c);
    if (g == 0) continue;
    for (auto& x : c) x /= g;
    if (bound > 0 && height(c) > bound) continue;
    mpz_class n2 = 0;
    for (const auto& x : c) n2 += x * x;
    cands.push_back({c, relation_residual(values, c, prec), n2});
  }
  if (cands.empty()) throw Error(Errc::NoRelation, "lindep: no relation within the coefficient bound");

  // A generic integer vector of height H reaches a relative residual of about
  // H^{-n/e} (e real constraints); a relation must beat that by 10 orders too.
  const double constraints = static_cast<double>(extra);
  auto certified = [&](const Candidate& c) {
    const double lr = c.residual.is_zero() ? -1e9 : c.residual.log2_abs() * std::log10(2.0);
    const double lh = std::log10(height(c.coeffs).get_d() + 1.0);
    return lr < -digits / 2.0 && lr < -(static_cast<double>(n) / constraints) * lh - 10.0;
  };
  // Shortest certified vector; with none certified, the smallest residual.
  auto best = std::min_element(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    const bool ca = certified(a), cb = certified(b);
    if (ca != cb) return ca;
    if (ca) return a.norm2 < b.norm2;
    return a.residual < b.residual;
  });

  RecognitionResult out;
  out.kind = kind;
  out.coefficients = best->coeffs;
  out.residual = best->residual;
  out.certified = certified(*best);
  auto& c = out.coefficients;
  if (kind == RelationKind::MinPolynomial) {
    while (c.size() > 1 && c.back() == 0) c.pop_back();
    if (c.back() < 0)
      for (auto& x : c) x = -x;
  } else {
    auto it = std::find_if(c.begin(), c.end(), [](const mpz_class& x) { return x != 0; });
    if (*it < 0)
      for (auto& x : c) x = -x;
  }
  return out;
}

}  // namespace

IntegerMatrix lll(const IntegerMatrix& basis, const mpq_class& delta) {
  if (!(delta > mpq_class(1, 4) && delta < 1)) throw Error(Errc::InvalidArgument, "lll: delta must lie in (1/4, 1)");
  mpq_class dl = delta;
  dl.canonicalize();
  return IntegralLll(basis, dl).run();
}

bool is_lll_reduced(const IntegerMatrix& basis, const mpq_class& delta) {
  const std::size_t n = basis.rows(), d = basis.cols();
  std::vector<std::vector<mpq_class>> star(n, std::vector<mpq_class>(d));
  std::vector<mpq_class> bn(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) star[i][c] = basis(i, c);
    for (std::size_t j = 0; j < i; ++j) {
      mpq_class num = 0;
      for (std::size_t c = 0; c < d; ++c) num += mpq_class(basis(i, c)) * star[j][c];
      const mpq_class mu = num / bn[j];
      if (abs(mu) > mpq_class(1, 2)) return false;
      for (std::size_t c = 0; c < d; ++c) star[i][c] -= mu * star[j][c];
    }
    bn[i] = 0;
    for (std::size_t c = 0; c < d; ++c) bn[i] += star[i][c] * star[i][c];
    if (bn[i] == 0) return false;
    if (i > 0) {
      mpq_class num = 0;
      for (std::size_t c = 0; c < d; ++c) num += mpq_class(basis(i, c)) * star[i - 1][c];
      const mpq_class mu = num / bn[i - 1];
      if (bn[i] < (delta - mu * mu) * bn[i - 1]) return false;
    }
  }
  return true;
}

RecognitionResult lindep(std::span<const BigComplex> values, Precision prec, const mpz_class& bound) {
  return lindep_impl(values, prec, bound, RelationKind::LinearRelation);
}

RecognitionResult lindep(std::span<const BigReal> values, Precision prec, const mpz_class& bound) {
  std::vector<BigComplex> c;
  for (const auto& v : values) c.emplace_back(v);
  return lindep_impl(c, prec, bound, RelationKind::LinearRelation);
}

RecognitionResult algdep(const BigComplex& u, int maxdeg, Precision prec, const mpz_class& bound) {
  if (maxdeg < 1) throw Error(Errc::InvalidArgument, "algdep: maxdeg must be at least 1");
  std::vector<BigComplex> powers;
  const Precision wp = std::max(prec, u.prec());
  BigComplex x(1L, wp);
  for (int i = 0; i <= maxdeg; ++i) {
    powers.push_back(x);
    x *= u.with_prec(wp);
  }
  return lindep_impl(powers, prec, bound, RelationKind::MinPolynomial);
}

RelativeRecognition relative_lindep(const BigComplex& value, std::span<const BigComplex> powers_of_z, Precision prec,
                                    const mpz_class& bound) {
  std::vector<BigComplex> vals{value};
  vals.insert(vals.end(), powers_of_z.begin(), powers_of_z.end());
  const RecognitionResult r = lindep_impl(vals, prec, bound, RelationKind::LinearRelation);
  if (r.coefficients[0] == 0) throw Error(Errc::NoRelation, "relative_lindep: relation does not involve the value");
  RelativeRecognition out;
  for (std::size_t i = 1; i < r.coefficients.size(); ++i) {
    mpq_class q(-r.coefficients[i], r.coefficients[0]);
    q.canonicalize();
    out.coords.push_back(q);
  }
  out.residual = r.residual;
  out.certified = r.certified;
  return out;
}

bool palindrome_check(const IntPolynomial& p) {
  const auto& c = p.coeffs();
  return std::equal(c.begin(), c.end(), c.rbegin());
}

bool palindrome_check(std::span<const NumberFieldElement> coeffs) {
  return std::equal(coeffs.begin(), coeffs.end(), coeffs.rbegin());
}

BigReal poly_residual(std::span<const BigComplex> coeffs, const BigComplex& u) {
  const Precision p = u.prec();
  if (coeffs.empty()) return BigReal(0L, p);
  BigComplex acc(p);
  BigReal h(0L, p);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * u + *it;
    const BigReal a = abs(*it);
    if (a > h) h = a;
  }
  BigReal m = abs(u);
  if (m < BigReal(1L, p)) m = BigReal(1L, p);
  BigReal denom = h;
  for (std::size_t i = 1; i < coeffs.size(); ++i) denom *= m;
  return abs(acc) / denom;
}

BigReal poly_residual(const IntPolynomial& p, const BigComplex& u) {
  std::vector<BigComplex> c;
  for (const auto& x : p.coeffs()) c.emplace_back(BigReal(x, u.prec()), BigReal(u.prec()));
  return poly_residual(c, u);
}

}  // namespace ellipgamma
