#include "ellipgamma/nfield.hpp"

#include <algorithm>
#include <sstream>

namespace ellipgamma {

RationalMatrix to_rational(const IntegerMatrix& m) {
  RationalMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

std::pair<IntegerMatrix, mpz_class> clear_denominators(const RationalMatrix& m) {
  mpz_class den = 1;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m(i, j).get_den_mpz_t());
  IntegerMatrix z(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const mpq_class& q = m(i, j);
      z(i, j) = q.get_num() * (den / q.get_den());
    }
  return {std::move(z), den};
}

mpz_class determinant(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::DimensionMismatch, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntegerMatrix a = m;
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j));
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

mpq_class determinant(const RationalMatrix& m) {
  const auto [z, den] = clear_denominators(m);
  mpq_class d(determinant(z));
  mpz_class scale;
  mpz_pow_ui(scale.get_mpz_t(), den.get_mpz_t(), m.rows());
  d /= scale;
  d.canonicalize();
  return d;
}

RationalMatrix inverse(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw Error(Errc::DimensionMismatch, "inverse of a non-square matrix");
  const std::size_t n = m.rows();
  RationalMatrix a = m;
  RationalMatrix inv = RationalMatrix::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw Error(Errc::SingularForm, "matrix is singular");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(p, j));
        std::swap(inv(k, j), inv(p, j));
      }
    }
    const mpq_class piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      const mpq_class f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

std::vector<mpq_class> solve(const RationalMatrix& m, std::span<const mpq_class> b) {
  if (b.size() != m.rows()) throw Error(Errc::DimensionMismatch, "solve: right-hand side length");
  const RationalMatrix inv = inverse(m);
  std::vector<mpq_class> x(m.cols());
  for (std::size_t i = 0; i < inv.rows(); ++i)
    for (std::size_t j = 0; j < inv.cols(); ++j) x[i] += inv(i, j) * b[j];
  return x;
}

namespace {

void column_axpy(IntegerMatrix& a, std::size_t dst, const mpz_class& q, std::size_t src) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (a(r, src) != 0) a(r, dst) -= q * a(r, src);
  }
}

void swap_columns(IntegerMatrix& a, std::size_t i, std::size_t j) {
  if (i == j) return;
  for (std::size_t r = 0; r < a.rows(); ++r) std::swap(a(r, i), a(r, j));
}

}  // namespace

IntegerMatrix hnf(const IntegerMatrix& m) {
  const std::size_t n = m.rows();
  const std::size_t k = m.cols();
  if (k < n) throw Error(Errc::RankDeficient, "fewer generators than rows");
  IntegerMatrix a = m;
  std::size_t c = k;  // columns [0, c) are still free
  for (std::size_t ii = n; ii-- > 0;) {
    const std::size_t pc = c - 1;
    while (true) {
      std::size_t best = k;
      for (std::size_t j = 0; j < c; ++j) {
        if (a(ii, j) == 0) continue;
        if (best == k || mpz_cmpabs(a(ii, j).get_mpz_t(), a(ii, best).get_mpz_t()) < 0) best = j;
      }
      if (best == k) throw Error(Errc::RankDeficient, "matrix does not have full row rank");
      swap_columns(a, best, pc);
      bool done = true;
      for (std::size_t j = 0; j < pc; ++j) {
        if (a(ii, j) == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a(ii, j).get_mpz_t(), a(ii, pc).get_mpz_t());
        column_axpy(a, j, q, pc);
        if (a(ii, j) != 0) done = false;
      }
      if (done) break;
    }
    if (a(ii, pc) < 0) {
      for (std::size_t r = 0; r < n; ++r) a(r, pc) = -a(r, pc);
    }
    for (std::size_t j = pc + 1; j < k; ++j) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), a(ii, j).get_mpz_t(), a(ii, pc).get_mpz_t());
      if (q != 0) column_axpy(a, j, q, pc);
    }
    c = pc;
  }
  IntegerMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = a(i, k - n + j);
  return h;
}

bool in_hnf_lattice(const IntegerMatrix& h, std::span<const mpz_class> v) {
  const std::size_t n = h.rows();
  if (v.size() != n) throw Error(Errc::DimensionMismatch, "vector length does not match lattice");
  std::vector<mpz_class> r(v.begin(), v.end());
  for (std::size_t i = n; i-- > 0;) {
    if (!mpz_divisible_p(r[i].get_mpz_t(), h(i, i).get_mpz_t())) return false;
    const mpz_class x = r[i] / h(i, i);
    if (x == 0) continue;
    for (std::size_t row = 0; row <= i; ++row) r[row] -= x * h(row, i);
  }
  return true;
}

std::string to_string(const IntegerMatrix& m) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? ", " : "") << m(i, j).get_str();
    os << ']';
  }
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------------------
// Polynomials over Q, used for inversion modulo the defining polynomial.

namespace {

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly sub_mul(const QPoly& a, const QPoly& q, const QPoly& b) {
  QPoly out = a;
  if (q.empty() || b.empty()) return out;
  out.resize(std::max(a.size(), q.size() + b.size() - 1));
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] -= q[i] * b[j];
  trim(out);
  return out;
}

// Polynomial long division; returns (quotient, remainder).
std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
  trim(a);
  QPoly q;
  if (a.size() < b.size()) return {q, a};
  q.assign(a.size() - b.size() + 1, mpq_class(0));
  const mpq_class& lead = b.back();
  for (std::size_t k = a.size() - 1;; --k) {
    if (a[k] != 0) {
      const mpq_class c = a[k] / lead;
      const std::size_t shift = k - (b.size() - 1);
      q[shift] = c;
      for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
    }
    if (k == b.size() - 1) break;
  }
  trim(a);
  trim(q);
  return {q, a};
}

}  // namespace

// ---------------------------------------------------------------------------

NumberField::NumberField(IntPolynomial poly, RationalMatrix basis, bool power_basis)
    : poly_(std::move(poly)), degree_(poly_.degree()), basis_(std::move(basis)), power_basis_(power_basis) {
  basis_inverse_ = ellipgamma::inverse(basis_);
}

std::shared_ptr<const NumberField> NumberField::create(IntPolynomial poly,
                                                       std::optional<std::vector<std::vector<mpq_class>>> integral_basis) {
  const int n = poly.degree();
  if (n < 1) throw Error(Errc::InvalidArgument, "defining polynomial must have positive degree");
  const auto un = static_cast<std::size_t>(n);
  RationalMatrix basis = RationalMatrix::identity(un);
  bool power = true;
  if (integral_basis) {
    if (integral_basis->size() != un) throw Error(Errc::DimensionMismatch, "integral basis must have n elements");
    for (auto& col : *integral_basis) {
      if (col.size() > un) throw Error(Errc::DimensionMismatch, "integral basis element has too many coordinates");
      col.resize(un, mpq_class(0));
    }
    basis = RationalMatrix::from_columns(*integral_basis);
    if (determinant(basis) == 0) throw Error(Errc::SingularForm, "integral basis is linearly dependent");
    power = basis == RationalMatrix::identity(un);
  }
  return std::shared_ptr<const NumberField>(new NumberField(std::move(poly), std::move(basis), power));
}

std::vector<mpq_class> NumberField::reduce(std::vector<mpq_class> c) const {
  const auto n = static_cast<std::size_t>(degree_);
  const mpq_class lead(poly_.leading());
  for (std::size_t k = c.size(); k-- > n;) {
    if (c[k] == 0) continue;
    const mpq_class f = c[k] / lead;
    for (std::size_t i = 0; i <= n; ++i) c[k - n + i] -= f * poly_[i];
  }
  c.resize(n, mpq_class(0));
  return c;
}

NumberFieldElement NumberField::element(std::vector<mpq_class> power_coeffs) const {
  for (auto& q : power_coeffs) q.canonicalize();
  return NumberFieldElement(shared_from_this(), reduce(std::move(power_coeffs)));
}

NumberFieldElement NumberField::one() const { return element({mpq_class(1)}); }

NumberFieldElement NumberField::generator() const { return element({mpq_class(0), mpq_class(1)}); }

NumberFieldElement NumberField::basis_element(std::size_t i) const { return element(basis_.column(i)); }

std::vector<mpq_class> NumberField::basis_coords(const NumberFieldElement& x) const {
  if (power_basis_) return x.coeffs();
  const auto& c = x.coeffs();
  std::vector<mpq_class> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) out[i] += basis_inverse_(i, j) * c[j];
  return out;
}

NumberFieldElement NumberField::from_basis_coords(std::span<const mpq_class> coords) const {
  const auto n = static_cast<std::size_t>(degree_);
  if (coords.size() != n) throw Error(Errc::DimensionMismatch, "coordinate vector length");
  std::vector<mpq_class> c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i] += basis_(i, j) * coords[j];
  return element(std::move(c));
}

RationalMatrix NumberField::multiplication_matrix(const NumberFieldElement& x) const {
  const auto n = static_cast<std::size_t>(degree_);
  std::vector<std::vector<mpq_class>> cols;
  cols.reserve(n);
  for (std::size_t j = 0; j < n; ++j) cols.push_back(basis_coords(x * basis_element(j)));
  return RationalMatrix::from_columns(cols);
}

mpq_class NumberField::trace(const NumberFieldElement& x) const {
  // The trace does not depend on the basis, so use the power basis.
  const auto n = static_cast<std::size_t>(degree_);
  mpq_class t = 0;
  std::vector<mpq_class> zj{mpq_class(1)};
  for (std::size_t j = 0; j < n; ++j) {
    const NumberFieldElement prod = x * element(zj);
    t += prod.coeffs()[j];
    zj.insert(zj.begin(), mpq_class(0));
  }
  return t;
}

NumberFieldElement::NumberFieldElement(std::shared_ptr<const NumberField> field, std::vector<mpq_class> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
  if (field_ && coeffs_.size() != static_cast<std::size_t>(field_->degree())) {
    throw Error(Errc::DimensionMismatch, "element coordinate count differs from field degree");
  }
}

bool NumberFieldElement::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const mpq_class& q) { return q == 0; });
}

namespace {

void check_same_field(const NumberFieldElement& a, const NumberFieldElement& b) {
  if (!a.field() || a.field() != b.field()) {
    if (!a.field() || !b.field() || !(a.field()->polynomial() == b.field()->polynomial())) {
      throw Error(Errc::DimensionMismatch, "elements belong to different fields");
    }
  }
}

}  // namespace

NumberFieldElement NumberFieldElement::operator-() const {
  auto c = coeffs_;
  for (auto& q : c) q = -q;
  return {field_, std::move(c)};
}

NumberFieldElement operator+(const NumberFieldElement& a, const NumberFieldElement& b) {
  check_same_field(a, b);
  auto c = a.coeffs_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coeffs_[i];
  return {a.field_, std::move(c)};
}

NumberFieldElement operator-(const NumberFieldElement& a, const NumberFieldElement& b) { return a + (-b); }

NumberFieldElement operator*(const NumberFieldElement& a, const NumberFieldElement& b) {
  check_same_field(a, b);
  const std::size_t n = a.coeffs_.size();
  std::vector<mpq_class> c(2 * n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return {a.field_, a.field_->reduce(std::move(c))};
}

NumberFieldElement operator*(const NumberFieldElement& a, const mpq_class& s) {
  auto c = a.coeffs_;
  for (auto& q : c) q *= s;
  return {a.field_, std::move(c)};
}

NumberFieldElement NumberFieldElement::inverse() const {
  if (!field_ || is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero");
  QPoly r0;
  for (const auto& c : field_->polynomial().coeffs()) r0.emplace_back(c);
  QPoly r1 = coeffs_;
  trim(r1);
  QPoly s0, s1{mpq_class(1)};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1);
    QPoly s2 = sub_mul(s0, q, s1);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) throw Error(Errc::DivisionByZero, "element is a zero divisor (reducible defining polynomial)");
  for (auto& c : s0) c /= r0[0];
  return field_->element(std::move(s0));
}

NumberFieldElement nf_arith(const NumberFieldElement& a, const NumberFieldElement& b, FieldOp op) {
  switch (op) {
    case FieldOp::Add:
      return a + b;
    case FieldOp::Mul:
      return a * b;
    case FieldOp::Inv:
      return a.inverse();
  }
  throw Error(Errc::InvalidArgument, "unknown field operation");
}

BigComplex NumberFieldElement::embed(const BigComplex& root) const {
  const Precision p = root.prec();
  BigComplex acc(p);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= root;
    acc.re() += BigReal(*it, p);
  }
  return acc;
}

std::string NumberFieldElement::to_string(std::string_view var) const {
  std::string out;
  for (std::size_t i = coeffs_.size(); i-- > 0;) {
    const mpq_class& c = coeffs_[i];
    if (c == 0) continue;
    const bool neg = c < 0;
    const mpq_class a = abs(c);
    if (out.empty()) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    if (i == 0) {
      out += a.get_str();
      continue;
    }
    if (a != 1) out += a.get_str() + "*";
    out += var;
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------

FractionalIdealHNF FractionalIdealHNF::from_generators(const RationalMatrix& generators) {
  auto [z, den] = clear_denominators(generators);
  FractionalIdealHNF out;
  out.hnf_ = hnf(z);
  mpz_class g = den;
  for (std::size_t i = 0; i < out.hnf_.rows(); ++i)
    for (std::size_t j = i; j < out.hnf_.cols(); ++j) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.hnf_(i, j).get_mpz_t());
  for (std::size_t i = 0; i < out.hnf_.rows(); ++i)
    for (std::size_t j = i; j < out.hnf_.cols(); ++j) mpz_divexact(out.hnf_(i, j).get_mpz_t(), out.hnf_(i, j).get_mpz_t(), g.get_mpz_t());
  out.den_ = den / g;
  return out;
}

FractionalIdealHNF FractionalIdealHNF::unit(std::size_t n) {
  FractionalIdealHNF out;
  out.hnf_ = IntegerMatrix::identity(n);
  return out;
}

mpq_class FractionalIdealHNF::norm() const {
  mpz_class num = 1;
  for (std::size_t i = 0; i < hnf_.rows(); ++i) num *= hnf_(i, i);
  mpz_class d;
  mpz_pow_ui(d.get_mpz_t(), den_.get_mpz_t(), hnf_.rows());
  mpq_class r(num, d);
  r.canonicalize();
  return r;
}

std::vector<mpq_class> FractionalIdealHNF::basis_vector(std::size_t j) const {
  std::vector<mpq_class> v(hnf_.rows());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = mpq_class(hnf_(i, j), den_);
    v[i].canonicalize();
  }
  return v;
}

RationalMatrix FractionalIdealHNF::basis() const {
  std::vector<std::vector<mpq_class>> cols;
  for (std::size_t j = 0; j < hnf_.cols(); ++j) cols.push_back(basis_vector(j));
  return RationalMatrix::from_columns(cols);
}

bool FractionalIdealHNF::contains(std::span<const mpq_class> coords) const {
  std::vector<mpz_class> v;
  for (const auto& q : coords) {
    const mpq_class s = q * den_;
    if (s.get_den() != 1) return false;
    v.push_back(s.get_num());
  }
  return in_hnf_lattice(hnf_, v);
}

FractionalIdealHNF FractionalIdealHNF::scaled(const mpq_class& s) const {
  if (s == 0) throw Error(Errc::InvalidArgument, "cannot scale an ideal by zero");
  RationalMatrix g = to_rational(hnf_);
  const mpq_class f = abs(s) / den_;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= f;
  return from_generators(g);
}

namespace {

// Integral-basis coordinates spanning {y : M y in Z^n for every M in mats}.
RationalMatrix dual_of_rows(const std::vector<RationalMatrix>& mats, std::size_t n) {
  RationalMatrix rows(n, n * mats.size());
  std::size_t col = 0;
  for (const auto& m : mats)
    for (std::size_t r = 0; r < n; ++r, ++col)
      for (std::size_t i = 0; i < n; ++i) rows(i, col) = m(r, i);
  // Lattice R spanned by the constraint rows; the answer is its dual R^* = (B_R^T)^{-1} Z^n.
  const FractionalIdealHNF r = FractionalIdealHNF::from_generators(rows);
  return inverse(r.basis().transpose());
}

}  // namespace

FractionalIdealHNF ideal_inverse(const NumberField& field, const FractionalIdealHNF& ideal) {
  const auto n = static_cast<std::size_t>(field.degree());
  if (ideal.degree() != n) throw Error(Errc::DimensionMismatch, "ideal degree differs from field degree");
  std::vector<RationalMatrix> mats;
  for (std::size_t j = 0; j < n; ++j) {
    mats.push_back(field.multiplication_matrix(field.from_basis_coords(ideal.basis_vector(j))));
  }
  return FractionalIdealHNF::from_generators(dual_of_rows(mats, n));
}

FractionalIdealHNF principal_ideal(const NumberField& field, const NumberFieldElement& x) {
  if (x.is_zero()) throw Error(Errc::InvalidArgument, "zero does not generate a fractional ideal");
  return FractionalIdealHNF::from_generators(field.multiplication_matrix(x));
}

mpq_class det_form(const NumberField& field, std::span<const NumberFieldElement> etas, const NumberFieldElement& x) {
  const auto n = static_cast<std::size_t>(field.degree());
  if (n < 2 || etas.size() != n - 2) {
    throw Error(Errc::DimensionMismatch, "det_form needs n - 2 = " + std::to_string(n >= 2 ? n - 2 : 0) + " units");
  }
  std::vector<std::vector<mpq_class>> cols;
  cols.push_back(field.basis_coords(field.one()));
  for (const auto& e : etas) cols.push_back(field.basis_coords(e));
  cols.push_back(field.basis_coords(x));
  return determinant(RationalMatrix::from_columns(cols));
}

std::vector<mpq_class> det_form_values(const NumberField& field, std::span<const NumberFieldElement> etas) {
  std::vector<mpq_class> v;
  for (std::size_t i = 0; i < static_cast<std::size_t>(field.degree()); ++i) {
    v.push_back(det_form(field, etas, field.basis_element(i)));
  }
  return v;
}

std::vector<mpq_class> trace_form_values(const NumberField& field) {
  std::vector<mpq_class> v;
  for (std::size_t i = 0; i < static_cast<std::size_t>(field.degree()); ++i) v.push_back(field.trace(field.basis_element(i)));
  return v;
}

std::vector<NumberFieldElement> cumulative_products(std::span<const NumberFieldElement> units) {
  std::vector<NumberFieldElement> out;
  for (const auto& u : units) out.push_back(out.empty() ? u : out.back() * u);
  return out;
}

FractionalIdealHNF different_of_form(const NumberField& field, std::span<const mpq_class> ell_values) {
  const auto n = static_cast<std::size_t>(field.degree());
  if (ell_values.size() != n) throw Error(Errc::DimensionMismatch, "linear form needs one value per basis element");
  if (std::all_of(ell_values.begin(), ell_values.end(), [](const mpq_class& q) { return q == 0; })) {
    throw Error(Errc::SingularForm, "linear form is zero");
  }
  auto ell = [&](const NumberFieldElement& x) {
    const auto c = field.basis_coords(x);
    mpq_class s = 0;
    for (std::size_t i = 0; i < n; ++i) s += c[i] * ell_values[i];
    return s;
  };
  RationalMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      t(i, j) = ell(field.basis_element(i) * field.basis_element(j));
      t(j, i) = t(i, j);
    }
  if (determinant(t) == 0) throw Error(Errc::SingularForm, "value matrix of the linear form is singular");
  // Inverse different: {x : ell(x w_i) in Z for all i} = columns of T^{-1}.
  const FractionalIdealHNF inv_diff = FractionalIdealHNF::from_generators(inverse(t));
  return ideal_inverse(field, inv_diff);
}

mpz_class lambda_tilde(const FractionalIdealHNF& d) {
  if (!d.is_integral()) throw Error(Errc::InvalidArgument, "lambda_tilde needs an integral ideal");
  mpz_class g = 0;
  const auto& h = d.numerator_hnf();
  for (std::size_t i = 0; i < h.rows(); ++i)
    for (std::size_t j = i; j < h.cols(); ++j) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), h(i, j).get_mpz_t());
  return g;
}

mpz_class t_tilde(const FractionalIdealHNF& d) {
  // With the first basis vector equal to 1, D cap Z is generated by the first HNF column.
  return d.numerator_hnf()(0, 0) / lambda_tilde(d);
}

mpz_class t_min(const mpz_class& lambda, std::span<const std::pair<mpz_class, unsigned long>> prime_valuations) {
  mpz_class t = lambda;
  for (const auto& [p, v] : prime_valuations) {
    mpz_class pv;
    mpz_pow_ui(pv.get_mpz_t(), p.get_mpz_t(), v);
    t *= pv;
  }
  return t;
}

ParallelepipedPoints parallelepiped_points(const std::vector<std::vector<mpz_class>>& alphas,
                                           const std::vector<mpz_class>& line_gen,
                                           const IntegerMatrix& lattice_basis) {
  const std::size_t n = line_gen.size();
  if (alphas.size() + 1 != n) throw Error(Errc::DimensionMismatch, "need n - 1 cone generators plus the line generator");
  if (lattice_basis.rows() == 0 || lattice_basis.cols() != n) {
    throw Error(Errc::DimensionMismatch, "lattice basis must have n columns");
  }
  auto cols = alphas;
  cols.push_back(line_gen);
  for (const auto& c : cols) {
    if (c.size() != n) throw Error(Errc::DimensionMismatch, "generator length differs from dimension");
  }
  const IntegerMatrix m = IntegerMatrix::from_columns(cols);
  if (determinant(m) == 0) throw Error(Errc::DegenerateCone, "cone generators are linearly dependent");
  const IntegerMatrix h = hnf(m);
  const RationalMatrix minv = inverse(to_rational(m));

  ParallelepipedPoints out;
  // Coset representatives of Z^n / M Z^n: 0 <= c_i < h_ii on the triangular HNF basis.
  std::vector<mpz_class> c(n, mpz_class(0));
  while (true) {
    std::vector<mpz_class> point(n);
    for (std::size_t i = 0; i < n; ++i) {
      mpq_class mu = 0;
      for (std::size_t j = 0; j < n; ++j) mu += minv(i, j) * c[j];
      mpz_class fl;
      mpz_fdiv_q(fl.get_mpz_t(), mu.get_num_mpz_t(), mu.get_den_mpz_t());
      for (std::size_t r = 0; r < n; ++r) point[r] -= fl * m(r, i);
    }
    for (std::size_t r = 0; r < n; ++r) point[r] += c[r];
    std::vector<mpz_class> amb(lattice_basis.rows());
    for (std::size_t r = 0; r < amb.size(); ++r)
      for (std::size_t j = 0; j < n; ++j) amb[r] += lattice_basis(r, j) * point[j];
    out.lattice_coords.push_back(std::move(point));
    out.ambient.push_back(std::move(amb));

    std::size_t i = 0;
    while (i < n) {
      c[i] += 1;
      if (c[i] < h(i, i)) break;
      c[i] = 0;
      ++i;
    }
    if (i == n) break;
  }
  return out;
}

}  // namespace ellipgamma
