#pragma once

// Jacobi theta function and the hierarchy of multiple elliptic Gamma
// functions G_r(z; tau_0, ..., tau_r), with theta = G_0.
//
// Values inside the center strip 0 < Im z < sum Im tau_k come from the
// exponential-sum formula. Everywhere else gr() first flips parameters with
// negative imaginary part (inversion identity) and then shifts z by the
// parameters (pseudo-periodicity) until the center strip is reached.

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

#include "ellipgamma/mpnum.hpp"

namespace ellipgamma {

struct GammaOptions {
  /// Smallest admissible decay rate 2*pi*margin of a series; below it the
  /// evaluation fails with Errc::ConvergenceTooSlow.
  double min_decay = 1e-6;
  /// Budget for pseudo-periodicity steps within one gr() call.
  std::uint64_t max_translations = 1'000'000;
  /// Translate against the parameter of largest imaginary part first
  /// (otherwise smallest). Both orders give the same value.
  bool largest_first = true;
};

struct GammaPoint {
  BigComplex z;
  std::vector<BigComplex> taus;

  int r() const { return static_cast<int>(taus.size()) - 1; }
};

/// theta(z, tau) = prod_{j>=0} (1 - q^{j+1} / x)(1 - q^j x) with x = e(z), q = e(tau).
/// Requires Im tau > 0.
BigComplex theta(const BigComplex& z, const BigComplex& tau, Precision prec, const GammaOptions& opts = {});

/// G_r inside the center strip by the exponential-sum formula.
/// Throws Errc::OutsideCenterStrip or Errc::ConvergenceTooSlow.
BigComplex gr_center(const GammaPoint& p, Precision prec, const GammaOptions& opts = {});

/// G_r for arbitrary z and parameters with nonzero imaginary parts.
/// Throws Errc::RealParameter, Errc::DepthExceeded, Errc::ConvergenceTooSlow.
BigComplex gr(const GammaPoint& p, Precision prec, const GammaOptions& opts = {});

/// G_r from its defining double product, truncated once every remaining factor
/// is within 2^{-prec-20} of 1; parameters with Im < 0 are first flipped by
/// inversion. A slow reference for cross-checks. Throws Errc::RealParameter, and
/// Errc::ConvergenceTooSlow when more than max_factors factors would be needed.
BigComplex gr_product(const GammaPoint& p, Precision prec, double max_factors = 2e7);

/// G_2 through its trigonometric series, which stays meaningful when one
/// parameter is real. Needs one parameter with Im > 0, one with Im = 0 and one
/// with Im < 0 (any order), and |Im(2z - sum tau)| < sum |Im tau|.
/// Throws Errc::InvalidArgument, Errc::OutsideCenterStrip, Errc::SmallDenominator.
BigComplex gr_real_variant(const BigComplex& z, std::span<const BigComplex> taus, Precision prec,
                           const GammaOptions& opts = {});

/// Generalized Bernoulli polynomial B_{n,n}(z; omega_1..omega_n): n! times the
/// constant term of e^{zt} / prod (e^{omega_j t} - 1). Throws Errc::ZeroOmega.
mpq_class bernoulli_nn(int n, const mpq_class& z, std::span<const mpq_class> omegas);
BigComplex bernoulli_nn(int n, const BigComplex& z, std::span<const BigComplex> omegas);

/// Relative residual of the modular property
///   prod_j G_{n-2}(z/omega_j; (omega_k/omega_j)_{k != j}) = exp(-2 pi i B_{n,n}(z; omega) / n!).
/// Throws Errc::RealRatio when some omega_k/omega_j is real to working precision.
BigReal modular_check(const BigComplex& z, std::span<const BigComplex> omegas, Precision prec,
                      const GammaOptions& opts = {});

}  // namespace ellipgamma
