#pragma once

// Exact arithmetic in number fields Q[x]/(P), exact integer linear algebra,
// and the ideal-theoretic quantities attached to a rational linear form:
// its different ideal, the scalar content of that ideal, and its
// intersection with Z.

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ellipgamma/error.hpp"
#include "ellipgamma/mpnum.hpp"

namespace ellipgamma {

/// Dense row-major matrix over an exact ring (mpz_class or mpq_class).
template <class T>
class ExactMatrix {
 public:
  ExactMatrix() = default;
  ExactMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static ExactMatrix from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty()) return {};
    ExactMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw Error(Errc::DimensionMismatch, "ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static ExactMatrix from_columns(const std::vector<std::vector<T>>& cols) {
    return from_rows(cols).transpose();
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }

  ExactMatrix transpose() const {
    ExactMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(Errc::DimensionMismatch, "matrix product shape mismatch");
    ExactMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntegerMatrix = ExactMatrix<mpz_class>;
using RationalMatrix = ExactMatrix<mpq_class>;

RationalMatrix to_rational(const IntegerMatrix& m);
/// Scales by the least common denominator; returns (integer matrix, denominator).
std::pair<IntegerMatrix, mpz_class> clear_denominators(const RationalMatrix& m);

/// Fraction-free (Bareiss) determinant.
mpz_class determinant(const IntegerMatrix& m);
mpq_class determinant(const RationalMatrix& m);
/// Throws Errc::SingularForm when the matrix is singular.
RationalMatrix inverse(const RationalMatrix& m);
/// Solves m * x = b exactly; m square and nonsingular.
std::vector<mpq_class> solve(const RationalMatrix& m, std::span<const mpq_class> b);

/// Column-style Hermite normal form of an n x k integer matrix of rank n:
/// an n x n upper-triangular matrix with positive pivots whose entries to the
/// right of each pivot lie in [0, pivot), spanning the same column lattice.
/// Throws Errc::RankDeficient when the rows are not independent.
IntegerMatrix hnf(const IntegerMatrix& m);

/// Whether the integer vector v lies in the column span of the HNF basis h.
bool in_hnf_lattice(const IntegerMatrix& h, std::span<const mpz_class> v);

class NumberField;

/// Element of Q[x]/(P), stored on the power basis 1, z, ..., z^{n-1}.
class NumberFieldElement {
 public:
  NumberFieldElement() = default;
  NumberFieldElement(std::shared_ptr<const NumberField> field, std::vector<mpq_class> coeffs);

  const std::shared_ptr<const NumberField>& field() const { return field_; }
  const std::vector<mpq_class>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  NumberFieldElement operator-() const;
  friend NumberFieldElement operator+(const NumberFieldElement& a, const NumberFieldElement& b);
  friend NumberFieldElement operator-(const NumberFieldElement& a, const NumberFieldElement& b);
  friend NumberFieldElement operator*(const NumberFieldElement& a, const NumberFieldElement& b);
  friend NumberFieldElement operator*(const NumberFieldElement& a, const mpq_class& s);
  friend bool operator==(const NumberFieldElement& a, const NumberFieldElement& b) {
    return a.coeffs_ == b.coeffs_;
  }

  /// Throws Errc::DivisionByZero for zero.
  NumberFieldElement inverse() const;

  /// Image under the embedding z -> root.
  BigComplex embed(const BigComplex& root) const;
  std::string to_string(std::string_view var = "z") const;

 private:
  std::shared_ptr<const NumberField> field_;
  std::vector<mpq_class> coeffs_;
};

enum class FieldOp { Add, Mul, Inv };

/// Exact a op b (b is ignored for Inv).
NumberFieldElement nf_arith(const NumberFieldElement& a, const NumberFieldElement& b, FieldOp op);

class NumberField : public std::enable_shared_from_this<NumberField> {
 public:
  /// `integral_basis` holds power-basis coordinates of each basis element; the
  /// power basis is used when it is absent.
  static std::shared_ptr<const NumberField> create(
      IntPolynomial poly, std::optional<std::vector<std::vector<mpq_class>>> integral_basis = std::nullopt);

  int degree() const { return degree_; }
  const IntPolynomial& polynomial() const { return poly_; }

  NumberFieldElement element(std::vector<mpq_class> power_coeffs) const;
  NumberFieldElement one() const;
  NumberFieldElement generator() const;

  /// i-th integral basis element.
  NumberFieldElement basis_element(std::size_t i) const;
  /// Columns are the power-basis coordinates of the integral basis.
  const RationalMatrix& basis_matrix() const { return basis_; }
  bool has_power_basis() const { return power_basis_; }

  /// Coordinates with respect to the integral basis.
  std::vector<mpq_class> basis_coords(const NumberFieldElement& x) const;
  NumberFieldElement from_basis_coords(std::span<const mpq_class> coords) const;

  /// Matrix of y -> x*y on the integral basis (column j is coords(x * w_j)).
  RationalMatrix multiplication_matrix(const NumberFieldElement& x) const;
  mpq_class trace(const NumberFieldElement& x) const;

  // Internal: reduction of a power-basis product modulo the defining polynomial.
  std::vector<mpq_class> reduce(std::vector<mpq_class> coeffs) const;

 private:
  NumberField(IntPolynomial poly, RationalMatrix basis, bool power_basis);

  IntPolynomial poly_;
  int degree_;
  RationalMatrix basis_;
  RationalMatrix basis_inverse_;
  bool power_basis_;
};

/// Fractional ideal (1/denominator) * (column lattice of `hnf`) on the integral basis.
class FractionalIdealHNF {
 public:
  FractionalIdealHNF() = default;
  /// Ideal spanned by the columns of `generators` (integral-basis coordinates).
  static FractionalIdealHNF from_generators(const RationalMatrix& generators);
  static FractionalIdealHNF unit(std::size_t n);

  const IntegerMatrix& numerator_hnf() const { return hnf_; }
  const mpz_class& denominator() const { return den_; }
  std::size_t degree() const { return hnf_.rows(); }
  bool is_integral() const { return den_ == 1; }

  /// Index [O_K : I] for integral ideals; in general the rational norm.
  mpq_class norm() const;
  /// Integral-basis coordinates of the j-th HNF basis vector.
  std::vector<mpq_class> basis_vector(std::size_t j) const;
  RationalMatrix basis() const;
  bool contains(std::span<const mpq_class> coords) const;
  FractionalIdealHNF scaled(const mpq_class& s) const;

  friend bool operator==(const FractionalIdealHNF& a, const FractionalIdealHNF& b) {
    return a.den_ == b.den_ && a.hnf_ == b.hnf_;
  }

 private:
  IntegerMatrix hnf_;
  mpz_class den_ = 1;
};

/// Inverse fractional ideal {y : y*I subset O_K}.
FractionalIdealHNF ideal_inverse(const NumberField& field, const FractionalIdealHNF& ideal);
/// Principal ideal x*O_K.
FractionalIdealHNF principal_ideal(const NumberField& field, const NumberFieldElement& x);

/// det(1, eta_1, ..., eta_{n-2}, x) with columns taken on the integral basis.
/// Throws Errc::DimensionMismatch unless etas.size() == n - 2.
mpq_class det_form(const NumberField& field, std::span<const NumberFieldElement> etas, const NumberFieldElement& x);
/// Values of det_form(etas, .) on the integral basis.
std::vector<mpq_class> det_form_values(const NumberField& field, std::span<const NumberFieldElement> etas);
/// Values of the trace form on the integral basis.
std::vector<mpq_class> trace_form_values(const NumberField& field);
/// Partial products eta_j = eps_1 * ... * eps_j for j = 1..size.
std::vector<NumberFieldElement> cumulative_products(std::span<const NumberFieldElement> units);

/// Different ideal of a rational linear form given by its values on the integral basis:
/// the inverse of {x : ell(x * O_K) subset Z}. Throws Errc::SingularForm for a degenerate form.
FractionalIdealHNF different_of_form(const NumberField& field, std::span<const mpq_class> ell_values);

/// Largest integer lambda with D subset lambda * O_K (gcd of the HNF entries).
mpz_class lambda_tilde(const FractionalIdealHNF& d);
/// Generator of (D cap Z) / lambda_tilde(D).
mpz_class t_tilde(const FractionalIdealHNF& d);
/// lambda * prod p_j^{v_j}.
mpz_class t_min(const mpz_class& lambda, std::span<const std::pair<mpz_class, unsigned long>> prime_valuations);

struct ParallelepipedPoints {
  /// Points in coordinates of the lattice basis.
  std::vector<std::vector<mpz_class>> lattice_coords;
  /// The same points in ambient coordinates (lattice_basis * lattice_coords).
  std::vector<std::vector<mpz_class>> ambient;
};

/// Lattice points of the half-open parallelepiped {sum mu_j alpha_j + mu_n line_gen, 0 <= mu < 1}.
/// alphas and line_gen are given in lattice coordinates; the result has exactly
/// |det(alpha_1, ..., alpha_{n-1}, line_gen)| points. Throws Errc::DegenerateCone when that determinant is 0.
ParallelepipedPoints parallelepiped_points(const std::vector<std::vector<mpz_class>>& alphas,
                                           const std::vector<mpz_class>& line_gen,
                                           const IntegerMatrix& lattice_basis);

std::string to_string(const IntegerMatrix& m);

}  // namespace ellipgamma
