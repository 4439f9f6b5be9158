#pragma once

// Arbitrary-precision real and complex numbers on top of MPFR.
//
// Every value owns its precision. Binary operations produce a result at the
// smaller of the two operand precisions, and nothing here reads or writes a
// process-wide default precision, so values can be used from several threads.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ellipgamma/error.hpp"

namespace ellipgamma {

/// Working precision in bits.
using Precision = mpfr_prec_t;

inline constexpr Precision kMinPrecision = 64;

/// Internal precision used by public numeric operations.
inline Precision guard_precision(Precision prec) {
  return prec + std::max<Precision>(32, prec / 10);
}

Precision digits_to_bits(int digits);
int bits_to_digits(Precision bits);

class BigReal {
 public:
  explicit BigReal(Precision prec = kMinPrecision);
  BigReal(long value, Precision prec);
  BigReal(int value, Precision prec) : BigReal(static_cast<long>(value), prec) {}
  BigReal(double value, Precision prec);
  BigReal(const mpz_class& value, Precision prec);
  BigReal(const mpq_class& value, Precision prec);

  /// Parses a decimal or scientific literal ("1.25", "-3e-40", "7/3").
  static BigReal parse(std::string_view text, Precision prec);

  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  Precision prec() const { return mpfr_get_prec(v_); }
  /// Copy rounded (or widened) to `prec` bits.
  BigReal with_prec(Precision prec) const;

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  /// log2|x|, -infinity for zero. Does not overflow for huge exponents.
  double log2_abs() const;
  mpz_class round_to_integer() const;
  mpz_class floor_to_integer() const;

  /// Shortest "%.*Rg"-style decimal representation with `digits` significant digits.
  std::string to_string(int digits) const;

  BigReal operator-() const;
  BigReal& operator+=(const BigReal& b);
  BigReal& operator-=(const BigReal& b);
  BigReal& operator*=(const BigReal& b);
  BigReal& operator/=(const BigReal& b);

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, long b);
  friend BigReal operator*(long a, const BigReal& b) { return b * a; }
  friend BigReal operator/(const BigReal& a, long b);

  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return b < a; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return b <= a; }
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  void narrow_to(Precision p);
  mpfr_t v_;
};

BigReal pi(Precision prec);
BigReal abs(const BigReal& x);
BigReal sqrt(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal log(const BigReal& x);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal atan2(const BigReal& y, const BigReal& x);
/// 2^e at the given precision.
BigReal pow2(long e, Precision prec);
/// 10^e at the given precision.
BigReal pow10(long e, Precision prec);

class BigComplex {
 public:
  explicit BigComplex(Precision prec = kMinPrecision) : re_(prec), im_(prec) {}
  BigComplex(BigReal re, BigReal im) : re_(std::move(re)), im_(std::move(im)) {}
  explicit BigComplex(BigReal re) : re_(std::move(re)), im_(re_.prec()) {}
  BigComplex(long value, Precision prec) : re_(value, prec), im_(prec) {}
  BigComplex(const mpq_class& value, Precision prec) : re_(value, prec), im_(prec) {}
  BigComplex(double re, double im, Precision prec) : re_(re, prec), im_(im, prec) {}

  /// Parses "a", "a+bi", "a-bi", "bi", "i" with decimal or rational parts.
  static BigComplex parse(std::string_view text, Precision prec);

  const BigReal& re() const { return re_; }
  const BigReal& im() const { return im_; }
  BigReal& re() { return re_; }
  BigReal& im() { return im_; }

  Precision prec() const { return std::min(re_.prec(), im_.prec()); }
  BigComplex with_prec(Precision prec) const { return {re_.with_prec(prec), im_.with_prec(prec)}; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

  BigComplex operator-() const { return {-re_, -im_}; }
  BigComplex& operator+=(const BigComplex& b);
  BigComplex& operator-=(const BigComplex& b);
  BigComplex& operator*=(const BigComplex& b);
  BigComplex& operator/=(const BigComplex& b);

  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(const BigComplex& a, const BigComplex& b);
  friend BigComplex operator/(const BigComplex& a, const BigComplex& b);
  friend BigComplex operator*(const BigComplex& a, const BigReal& b) { return {a.re_ * b, a.im_ * b}; }
  friend BigComplex operator/(const BigComplex& a, const BigReal& b) { return {a.re_ / b, a.im_ / b}; }
  friend BigComplex operator*(const BigComplex& a, long b) { return {a.re_ * b, a.im_ * b}; }
  friend BigComplex operator/(const BigComplex& a, long b) { return {a.re_ / b, a.im_ / b}; }

 private:
  BigReal re_;
  BigReal im_;
};

BigComplex conj(const BigComplex& z);
/// |z|^2
BigReal norm(const BigComplex& z);
BigReal abs(const BigComplex& z);
BigReal arg(const BigComplex& z);
BigComplex exp(const BigComplex& z);
/// Principal branch.
BigComplex log(const BigComplex& z);
BigComplex inverse(const BigComplex& z);
BigComplex pow(const BigComplex& z, long n);
/// Product of two complex numbers written into `out`, which must not alias the inputs.
void mul_to(BigComplex& out, const BigComplex& a, const BigComplex& b);

/// exp(2*pi*i*x). Throws Errc::Overflow when 2*pi*|Im x| leaves MPFR's exponent range.
BigComplex e2pi(const BigComplex& x);

/// Integer polynomial, lowest degree coefficient first.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<mpz_class> coeffs);
  IntPolynomial(std::initializer_list<long> coeffs);

  /// Parses a comma separated coefficient list, lowest degree first.
  static IntPolynomial parse_list(std::string_view text);

  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const mpz_class& operator[](std::size_t i) const { return coeffs_[i]; }
  const mpz_class& leading() const { return coeffs_.back(); }

  IntPolynomial derivative() const;
  /// Largest absolute coefficient.
  mpz_class height() const;
  BigComplex eval(const BigComplex& x) const;
  /// Human readable form such as "x^2 - x - 1".
  std::string to_string(std::string_view var = "x") const;

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  void trim();
  std::vector<mpz_class> coeffs_;
};

/// All complex roots by Aberth-Ehrlich iteration, polished by Newton steps at `prec` bits.
std::vector<BigComplex> polynomial_roots(const IntPolynomial& p, Precision prec);

/// The root with positive imaginary part (largest imaginary part if several).
/// Throws Errc::NoUpperRoot if every isolated root is real.
BigComplex upper_root(const IntPolynomial& p, Precision prec);

}  // namespace ellipgamma
