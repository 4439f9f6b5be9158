#pragma once

// Integer relation detection by LLL reduction: linear dependencies among
// high-precision numbers, minimal polynomials, coordinates on a power basis,
// and residual checks for candidate polynomials.

#include <gmpxx.h>

#include <span>
#include <vector>

#include "ellipgamma/mpnum.hpp"
#include "ellipgamma/nfield.hpp"

namespace ellipgamma {

/// LLL reduction of the rows of `basis` with exact integer Gram-Schmidt data.
/// delta must lie in (1/4, 1). Throws Errc::RankDeficient for dependent rows.
IntegerMatrix lll(const IntegerMatrix& basis, const mpq_class& delta = mpq_class(99, 100));

/// Size reduction |mu_ij| <= 1/2 and the Lovasz condition, checked exactly.
bool is_lll_reduced(const IntegerMatrix& basis, const mpq_class& delta = mpq_class(99, 100));

enum class RelationKind { LinearRelation, MinPolynomial };

struct RecognitionResult {
  RelationKind kind = RelationKind::LinearRelation;
  /// Content 1. For a minimal polynomial: lowest degree first, leading coefficient positive;
  /// otherwise the first nonzero coefficient is positive.
  std::vector<mpz_class> coefficients;
  /// |sum c_i v_i| / sum |c_i| |v_i|.
  BigReal residual;
  /// residual < 10^{-digits/2} (digits: decimal precision of the inputs) and
  /// residual < 10^{-10} H^{-n/e} for height H, n values and e real constraints.
  bool certified = false;
};

/// Small integer vector c with sum c_i v_i close to 0, |c_i| <= bound.
/// `prec` is the precision the values are trusted to. Throws Errc::NoRelation
/// when no reduced vector satisfies the bound.
RecognitionResult lindep(std::span<const BigComplex> values, Precision prec, const mpz_class& bound);
RecognitionResult lindep(std::span<const BigReal> values, Precision prec, const mpz_class& bound);

/// Integer polynomial of degree <= maxdeg vanishing approximately at u.
RecognitionResult algdep(const BigComplex& u, int maxdeg, Precision prec,
                         const mpz_class& bound = mpz_class(0));

struct RelativeRecognition {
  /// value = sum coords[i] * z^i.
  std::vector<mpq_class> coords;
  BigReal residual;
  bool certified = false;
};

/// Rational coordinates of `value` on 1, z, ..., z^{n-1} (given embedded as powers_of_z).
RelativeRecognition relative_lindep(const BigComplex& value, std::span<const BigComplex> powers_of_z, Precision prec,
                                    const mpz_class& bound = mpz_class(0));

bool palindrome_check(const IntPolynomial& p);
bool palindrome_check(std::span<const NumberFieldElement> coeffs);

/// |P(u)| / (max |c_i| * max(1, |u|)^deg) for coefficients given lowest degree first.
BigReal poly_residual(std::span<const BigComplex> coeffs, const BigComplex& u);
BigReal poly_residual(const IntPolynomial& p, const BigComplex& u);

}  // namespace ellipgamma
