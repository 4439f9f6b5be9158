#include "ellipgamma/mpnum.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace ellipgamma {

namespace {

Precision clamp_prec(Precision p) { return std::max(p, kMinPrecision); }

std::string strip_spaces(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != ' ' && c != '\t' && c != '\n') out.push_back(c);
  }
  return out;
}

}  // namespace

Precision digits_to_bits(int digits) {
  return clamp_prec(static_cast<Precision>(std::ceil(digits * 3.3219280948873623)) + 1);
}

int bits_to_digits(Precision bits) { return static_cast<int>(std::floor(bits * 0.30102999566398120)); }

// ---------------------------------------------------------------- BigReal

BigReal::BigReal(Precision prec) {
  mpfr_init2(v_, clamp_prec(prec));
  mpfr_set_zero(v_, 1);
}

BigReal::BigReal(long value, Precision prec) {
  mpfr_init2(v_, clamp_prec(prec));
  mpfr_set_si(v_, value, MPFR_RNDN);
}

BigReal::BigReal(double value, Precision prec) {
  mpfr_init2(v_, clamp_prec(prec));
  mpfr_set_d(v_, value, MPFR_RNDN);
}

BigReal::BigReal(const mpz_class& value, Precision prec) {
  mpfr_init2(v_, clamp_prec(prec));
  mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
}

BigReal::BigReal(const mpq_class& value, Precision prec) {
  mpfr_init2(v_, clamp_prec(prec));
  mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

BigReal BigReal::parse(std::string_view text, Precision prec) {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw Error(Errc::InvalidArgument, "empty real literal");
  if (s.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) {
      throw Error(Errc::InvalidArgument, "malformed rational literal '" + s + "'");
    }
    q.canonicalize();
    return BigReal(q, prec);
  }
  BigReal r(prec);
  char* end = nullptr;
  mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0') {
    throw Error(Errc::InvalidArgument, "malformed real literal '" + s + "'");
  }
  return r;
}

BigReal::BigReal(const BigReal& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& other) noexcept {
  std::memcpy(v_, other.v_, sizeof(mpfr_t));
  other.v_->_mpfr_d = nullptr;
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this == &other) return *this;
  if (v_->_mpfr_d == nullptr) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
  } else {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
  }
  mpfr_set(v_, other.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  if (this != &other) {
    mpfr_t tmp;
    std::memcpy(tmp, v_, sizeof(mpfr_t));
    std::memcpy(v_, other.v_, sizeof(mpfr_t));
    std::memcpy(other.v_, tmp, sizeof(mpfr_t));
  }
  return *this;
}

BigReal::~BigReal() {
  if (v_->_mpfr_d != nullptr) mpfr_clear(v_);
}

BigReal BigReal::with_prec(Precision prec) const {
  BigReal r(prec);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

void BigReal::narrow_to(Precision p) {
  if (p < prec()) mpfr_prec_round(v_, p, MPFR_RNDN);
}

double BigReal::log2_abs() const {
  if (mpfr_zero_p(v_)) return -INFINITY;
  long e = 0;
  const double d = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
  return std::log2(std::fabs(d)) + static_cast<double>(e);
}

mpz_class BigReal::round_to_integer() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
  return z;
}

mpz_class BigReal::floor_to_integer() const {
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
  return z;
}

std::string BigReal::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", std::max(digits, 1), v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

BigReal BigReal::operator-() const {
  BigReal r(prec());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

BigReal& BigReal::operator+=(const BigReal& b) {
  narrow_to(b.prec());
  mpfr_add(v_, v_, b.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator-=(const BigReal& b) {
  narrow_to(b.prec());
  mpfr_sub(v_, v_, b.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator*=(const BigReal& b) {
  narrow_to(b.prec());
  mpfr_mul(v_, v_, b.v_, MPFR_RNDN);
  return *this;
}

BigReal& BigReal::operator/=(const BigReal& b) {
  narrow_to(b.prec());
  mpfr_div(v_, v_, b.v_, MPFR_RNDN);
  return *this;
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  BigReal r(std::min(a.prec(), b.prec()));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator-(const BigReal& a, const BigReal& b) {
  BigReal r(std::min(a.prec(), b.prec()));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, const BigReal& b) {
  BigReal r(std::min(a.prec(), b.prec()));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  BigReal r(std::min(a.prec(), b.prec()));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigReal operator*(const BigReal& a, long b) {
  BigReal r(a.prec());
  mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigReal operator/(const BigReal& a, long b) {
  BigReal r(a.prec());
  mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}

BigReal pi(Precision prec) {
  BigReal r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

BigReal abs(const BigReal& x) {
  BigReal r(x.prec());
  mpfr_abs(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal sqrt(const BigReal& x) {
  BigReal r(x.prec());
  mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal exp(const BigReal& x) {
  BigReal r(x.prec());
  mpfr_exp(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal log(const BigReal& x) {
  BigReal r(x.prec());
  mpfr_log(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal sin(const BigReal& x) {
  BigReal r(x.prec());
  mpfr_sin(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal cos(const BigReal& x) {
  BigReal r(x.prec());
  mpfr_cos(r.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal atan2(const BigReal& y, const BigReal& x) {
  BigReal r(std::min(x.prec(), y.prec()));
  mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN);
  return r;
}

BigReal pow2(long e, Precision prec) {
  BigReal r(1L, prec);
  mpfr_mul_2si(r.get(), r.get(), e, MPFR_RNDN);
  return r;
}

BigReal pow10(long e, Precision prec) {
  BigReal r(prec);
  mpfr_ui_pow_ui(r.get(), 10, static_cast<unsigned long>(e < 0 ? -e : e), MPFR_RNDN);
  if (e < 0) mpfr_ui_div(r.get(), 1, r.get(), MPFR_RNDN);
  return r;
}

// ---------------------------------------------------------------- BigComplex

BigComplex BigComplex::parse(std::string_view text, Precision prec) {
  std::string s = strip_spaces(text);
  if (s.empty()) throw Error(Errc::InvalidArgument, "empty complex literal");
  auto imag_part = [&](std::string t) {
    // t ends with 'i'
    t.pop_back();
    if (t.empty() || t == "+") return BigReal(1L, prec);
    if (t == "-") return BigReal(-1L, prec);
    if (t.back() == '*') t.pop_back();
    return BigReal::parse(t, prec);
  };
  if (s.back() != 'i') return BigComplex(BigReal::parse(s, prec), BigReal(prec));
  // Split at the last sign that is not the leading one and not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size() - 1; k > 0; --k) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) return BigComplex(BigReal(prec), imag_part(s));
  return BigComplex(BigReal::parse(s.substr(0, split), prec), imag_part(s.substr(split)));
}

void mul_to(BigComplex& out, const BigComplex& a, const BigComplex& b) {
  const Precision p = std::min(a.prec(), b.prec());
  if (out.re().prec() != p) mpfr_set_prec(out.re().get(), p);
  if (out.im().prec() != p) mpfr_set_prec(out.im().get(), p);
  mpfr_fmms(out.re().get(), a.re().get(), b.re().get(), a.im().get(), b.im().get(), MPFR_RNDN);
  mpfr_fmma(out.im().get(), a.re().get(), b.im().get(), a.im().get(), b.re().get(), MPFR_RNDN);
}

BigComplex& BigComplex::operator+=(const BigComplex& b) {
  re_ += b.re_;
  im_ += b.im_;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& b) {
  re_ -= b.re_;
  im_ -= b.im_;
  return *this;
}

BigComplex operator*(const BigComplex& a, const BigComplex& b) {
  BigComplex r(std::min(a.prec(), b.prec()));
  mul_to(r, a, b);
  return r;
}

BigComplex& BigComplex::operator*=(const BigComplex& b) {
  BigComplex r(std::min(prec(), b.prec()));
  mul_to(r, *this, b);
  *this = std::move(r);
  return *this;
}

BigComplex operator/(const BigComplex& a, const BigComplex& b) {
  if (b.is_zero()) throw Error(Errc::DivisionByZero, "complex division by zero");
  const BigReal d = norm(b);
  BigComplex r = a * conj(b);
  r.re() /= d;
  r.im() /= d;
  return r;
}

BigComplex& BigComplex::operator/=(const BigComplex& b) {
  *this = *this / b;
  return *this;
}

BigComplex conj(const BigComplex& z) { return {z.re(), -z.im()}; }

BigReal norm(const BigComplex& z) {
  BigReal r(z.prec());
  mpfr_fmma(r.get(), z.re().get(), z.re().get(), z.im().get(), z.im().get(), MPFR_RNDN);
  return r;
}

BigReal abs(const BigComplex& z) {
  BigReal r(z.prec());
  mpfr_hypot(r.get(), z.re().get(), z.im().get(), MPFR_RNDN);
  return r;
}

BigReal arg(const BigComplex& z) { return atan2(z.im(), z.re()); }

BigComplex exp(const BigComplex& z) {
  const Precision p = z.prec();
  BigReal c(p), s(p);
  mpfr_sin_cos(s.get(), c.get(), z.im().get(), MPFR_RNDN);
  const BigReal m = exp(z.re());
  if (!m.is_finite()) throw Error(Errc::Overflow, "complex exponential out of range");
  return {m * c, m * s};
}

BigComplex log(const BigComplex& z) {
  if (z.is_zero()) throw Error(Errc::ZeroValue, "logarithm of zero");
  return {log(abs(z)), arg(z)};
}

BigComplex inverse(const BigComplex& z) {
  if (z.is_zero()) throw Error(Errc::DivisionByZero, "inverse of zero");
  const BigReal d = norm(z);
  return {z.re() / d, -z.im() / d};
}

BigComplex pow(const BigComplex& z, long n) {
  if (n < 0) return inverse(pow(z, -n));
  BigComplex result(1L, z.prec());
  BigComplex base = z;
  unsigned long e = static_cast<unsigned long>(n);
  while (e != 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e != 0) base *= base;
  }
  return result;
}

BigComplex e2pi(const BigComplex& x) {
  const Precision out = x.prec();
  const Precision wp = guard_precision(out);
  const double im = x.im().to_double();
  const double limit = static_cast<double>(mpfr_get_emax()) * 0.69314718055994531 / (2.0 * M_PI);
  if (!x.is_finite() || std::fabs(im) > 0.9 * limit) {
    throw Error(Errc::Overflow, "e2pi: |Im x| too large for the exponent range");
  }
  // Reduce the real part modulo 1 exactly before scaling by 2*pi.
  BigReal t = x.re().with_prec(std::max<Precision>(wp, x.re().prec()));
  BigReal n(t.prec());
  mpfr_rint(n.get(), t.get(), MPFR_RNDN);
  t -= n;
  const BigReal two_pi = pi(wp) * 2L;
  BigReal angle = t.with_prec(wp) * two_pi;
  BigReal c(wp), s(wp);
  mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
  BigReal mag = exp(-(x.im().with_prec(wp) * two_pi));
  if (!mag.is_finite() || mag.is_zero()) {
    throw Error(Errc::Overflow, "e2pi: magnitude outside the exponent range");
  }
  return BigComplex(mag * c, mag * s).with_prec(out);
}

}  // namespace ellipgamma
