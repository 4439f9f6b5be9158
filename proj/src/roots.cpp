#include <cmath>
#include <sstream>

#include "ellipgamma/mpnum.hpp"

namespace ellipgamma {

IntPolynomial::IntPolynomial(std::vector<mpz_class> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

IntPolynomial::IntPolynomial(std::initializer_list<long> coeffs) {
  for (long c : coeffs) coeffs_.emplace_back(c);
  trim();
}

IntPolynomial IntPolynomial::parse_list(std::string_view text) {
  std::vector<mpz_class> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    std::string t;
    for (char c : item) {
      if (c != ' ') t.push_back(c);
    }
    mpz_class v;
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    if (t.empty() || v.set_str(t, 10) != 0) {
      throw Error(Errc::InvalidArgument, "malformed integer coefficient '" + item + "'");
    }
    out.push_back(v);
  }
  return IntPolynomial(std::move(out));
}

void IntPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPolynomial IntPolynomial::derivative() const {
  std::vector<mpz_class> d;
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * static_cast<long>(i));
  return IntPolynomial(std::move(d));
}

mpz_class IntPolynomial::height() const {
  mpz_class h = 0;
  for (const auto& c : coeffs_) h = std::max(h, mpz_class(abs(c)));
  return h;
}

BigComplex IntPolynomial::eval(const BigComplex& x) const {
  const Precision p = x.prec();
  BigComplex acc(p);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc.re() += BigReal(*it, p);
  }
  return acc;
}

std::string IntPolynomial::to_string(std::string_view var) const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    const bool neg = c < 0;
    const mpz_class a = abs(c);
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (a != 1 || i == 0) out += a.get_str();
    if (i >= 1) out += var;
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

namespace {

struct EvalPair {
  BigComplex value;
  BigComplex deriv;
};

EvalPair eval_with_derivative(const std::vector<BigComplex>& a, const BigComplex& x) {
  const Precision p = x.prec();
  BigComplex v(p), d(p);
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    d = d * x + v;
    v = v * x + *it;
  }
  return {std::move(v), std::move(d)};
}

std::vector<BigComplex> coefficients_at(const IntPolynomial& p, Precision prec) {
  std::vector<BigComplex> a;
  for (const auto& c : p.coeffs()) a.emplace_back(BigReal(c, prec), BigReal(prec));
  return a;
}

BigComplex newton_polish(const IntPolynomial& poly, BigComplex z, Precision from, Precision target) {
  Precision p = from;
  while (true) {
    const auto a = coefficients_at(poly, p);
    z = z.with_prec(p);
    auto [v, d] = eval_with_derivative(a, z);
    if (!d.is_zero()) z -= v / d;
    if (p >= target) break;
    p = std::min<Precision>(2 * p, target);
  }
  const auto a = coefficients_at(poly, target);
  for (int extra = 0; extra < 2; ++extra) {
    auto [v, d] = eval_with_derivative(a, z);
    if (d.is_zero()) break;
    z -= v / d;
  }
  return z;
}

}  // namespace

std::vector<BigComplex> polynomial_roots(const IntPolynomial& p, Precision prec) {
  const int d = p.degree();
  if (d < 1) throw Error(Errc::InvalidArgument, "polynomial_roots: degree must be at least 1");
  const Precision wp0 = std::max<Precision>(128, std::min<Precision>(prec, 256));
  const auto a = coefficients_at(p, wp0);

  // Starting radius: geometric mean of the root moduli.
  double r0 = 1.0;
  if (p[0] != 0) {
    const double lg = (BigReal(p[0], 64).log2_abs() - BigReal(p.leading(), 64).log2_abs()) / d;
    r0 = std::exp2(lg);
  }
  std::vector<BigComplex> z;
  for (int k = 0; k < d; ++k) {
    const double ang = 2.0 * M_PI * k / d + 0.4;
    const double rad = r0 * (1.0 + 0.01 * k);
    z.emplace_back(rad * std::cos(ang), rad * std::sin(ang), wp0);
  }

  const double tol = std::ldexp(1.0, -static_cast<int>(wp0) + 12);
  for (int iter = 0; iter < 1000; ++iter) {
    double worst = 0.0;
    for (int k = 0; k < d; ++k) {
      auto [v, dv] = eval_with_derivative(a, z[static_cast<std::size_t>(k)]);
      if (v.is_zero()) continue;
      if (dv.is_zero()) dv = BigComplex(1L, wp0);
      const BigComplex ratio = v / dv;
      BigComplex s(wp0);
      for (int j = 0; j < d; ++j) {
        if (j != k) s += inverse(z[static_cast<std::size_t>(k)] - z[static_cast<std::size_t>(j)]);
      }
      const BigComplex w = ratio / (BigComplex(1L, wp0) - ratio * s);
      z[static_cast<std::size_t>(k)] -= w;
      const double scale = std::max(1.0, abs(z[static_cast<std::size_t>(k)]).to_double());
      worst = std::max(worst, abs(w).to_double() / scale);
    }
    if (worst < tol) break;
  }

  std::vector<BigComplex> roots;
  roots.reserve(z.size());
  for (auto& r : z) roots.push_back(newton_polish(p, r, wp0, std::max(prec, wp0)).with_prec(prec));
  return roots;
}

BigComplex upper_root(const IntPolynomial& p, Precision prec) {
  const auto roots = polynomial_roots(p, guard_precision(prec));
  const BigComplex* best = nullptr;
  for (const auto& r : roots) {
    const double scale = std::max(1.0, abs(r).to_double());
    // Below this the imaginary part is indistinguishable from rounding noise of the isolation pass.
    if (r.im().to_double() <= std::ldexp(scale, -60)) continue;
    if (best == nullptr || r.im() > best->im()) best = &r;
  }
  if (best == nullptr) throw Error(Errc::NoUpperRoot, "all roots of " + p.to_string() + " are real");
  return best->with_prec(prec);
}

}  // namespace ellipgamma
