#pragma once

// Smoothed products of G_{n-2} values at points of a number field with one
// complex place (higher elliptic units), their log|u|^2, and the search for
// the exponent signs of the individual factors.

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ellipgamma/gamma.hpp"
#include "ellipgamma/mpnum.hpp"
#include "ellipgamma/nfield.hpp"

namespace ellipgamma {

/// One factor G(z, tau/level)^{nu*N} / G(N z, N tau/level)^{nu}
/// with z = arg_rational + arg_delta/level.
struct UnitTermSpec {
  std::vector<NumberFieldElement> taus;
  mpz_class level = 1;
  mpq_class arg_rational = 0;
  /// Empty (no field attached) means zero.
  NumberFieldElement arg_delta;
  int nu = 1;
  long smoothing_N = 2;
  /// Evaluate through the trigonometric series; one parameter is then real.
  bool real_variant = false;
};

struct UnitReference {
  /// Printed approximation as decimal strings.
  std::optional<std::string> value_re, value_im;
  /// Integer polynomial with the unit as a root.
  std::optional<IntPolynomial> absolute_poly;
  /// Relative polynomial over the field, lowest degree first.
  std::optional<std::vector<NumberFieldElement>> relative_poly;
  /// Printed value of log|u|^2.
  std::optional<std::string> klf_value;
};

struct UnitSpec {
  std::shared_ptr<const NumberField> field;
  std::vector<UnitTermSpec> terms;
  long k = 1;
  std::string label;
  UnitReference reference;
};

/// The complex embedding z -> upper root of the defining polynomial.
class Embedding {
 public:
  Embedding(std::shared_ptr<const NumberField> field, Precision prec);

  const NumberField& field() const { return *field_; }
  const BigComplex& root() const { return root_; }
  Precision prec() const { return root_.prec(); }
  BigComplex operator()(const NumberFieldElement& x) const;

 private:
  std::shared_ptr<const NumberField> field_;
  BigComplex root_;
};

/// Embedding precision adequate for evaluations at `prec` bits.
Precision embedding_precision(Precision prec);

/// Embedded first argument and parameters of a term (before smoothing).
/// Parameters whose imaginary part is rounding noise are snapped to the real
/// axis when the term uses the real variant.
GammaPoint term_point(const UnitTermSpec& t, const Embedding& emb);

/// Throws Errc::CenterStripViolation, Errc::InvalidArgument and all gamma errors.
BigComplex eval_term(const UnitTermSpec& t, const Embedding& emb, Precision prec, const GammaOptions& opts = {});

struct UnitValue {
  BigComplex value;
  std::vector<BigComplex> term_values;
  std::vector<double> term_seconds;
};

/// Worker count from ELLIPGAMMA_THREADS (at least 1), else the hardware concurrency.
unsigned thread_cap();

/// Product of the term values. Terms run in parallel up to thread_cap();
/// the product is formed in term order.
UnitValue eval_unit(const UnitSpec& u, const Embedding& emb, Precision prec, const GammaOptions& opts = {});

/// 2 log|u|. Throws Errc::ZeroValue.
BigReal log_abs_sq(const BigComplex& u);

struct SignSearchResult {
  std::vector<int> signs;
  BigReal log_abs_sq;
};

/// Signs nu_i in {+1, -1} with |sum nu_i log|t_i|^2 - reference| < tolerance,
/// where t_i are the term values for nu = +1. At most 24 terms.
/// Throws Errc::NoMatch, or Errc::Ambiguous listing every match.
SignSearchResult sign_search(std::span<const BigComplex> positive_term_values, const BigReal& reference,
                             double tolerance = 1e-10);
/// Same, evaluating the terms of `u` with nu = +1 first.
SignSearchResult sign_search(const UnitSpec& u, const Embedding& emb, const BigReal& reference, Precision prec,
                             double tolerance = 1e-10, const GammaOptions& opts = {});

}  // namespace ellipgamma
