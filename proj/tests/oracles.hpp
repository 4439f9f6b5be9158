#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ellipgamma/mpnum.hpp"

namespace oracles {

using namespace ellipgamma;

/// Truncated defining product
///   prod_{m >= 0} (1 - e(-z + sum (m_k + 1) tau_k)) (1 - e(z + sum m_k tau_k))^{(-1)^r},
/// keeping every factor whose exponential exceeds 2^{-prec-20}.
inline BigComplex gr_product(const BigComplex& z, const std::vector<BigComplex>& taus, Precision prec) {
  const std::size_t n = taus.size();
  const int r = static_cast<int>(n) - 1;
  BigComplex sum_tau(prec);
  std::vector<double> im;
  for (const auto& t : taus) {
    sum_tau += t.with_prec(prec);
    im.push_back(t.im().to_double());
  }
  const double zi = z.im().to_double();
  const double si = sum_tau.im().to_double();
  // |e(w)| = exp(-2 pi Im w); stop once both factors are within 2^{-prec-20} of 1.
  const double cutoff = (static_cast<double>(prec) + 20.0) * std::log(2.0) / (2.0 * M_PI);
  BigComplex prod(1L, prec);
  const BigComplex one(1L, prec);
  const BigComplex zw = z.with_prec(prec);
  std::vector<long> m(n, 0);
  std::function<void(std::size_t, double, BigComplex)> rec = [&](std::size_t k, double acc, BigComplex w) {
    if (k == n) {
      const BigComplex f1 = one - e2pi(-zw + w + sum_tau);
      const BigComplex f2 = one - e2pi(zw + w);
      prod *= f1;
      prod = (r % 2 == 0) ? prod * f2 : prod / f2;
      return;
    }
    for (long mk = 0;; ++mk) {
      const double a = acc + static_cast<double>(mk) * im[k];
      if (std::min(a + si - zi, a + zi) > cutoff && mk > 0) break;
      rec(k + 1, a, w + taus[k].with_prec(prec) * mk);
    }
  };
  rec(0, 0.0, BigComplex(prec));
  return prod;
}

inline BigComplex random_complex(std::mt19937_64& rng, double re_lo, double re_hi, double im_lo, double im_hi,
                                 Precision prec) {
  std::uniform_real_distribution<double> ur(re_lo, re_hi), ui(im_lo, im_hi);
  return BigComplex(ur(rng), ui(rng), prec);
}

inline double rel_log10(const BigComplex& a, const BigComplex& b) {
  const BigReal d = abs(a - b);
  if (d.is_zero()) return -1e9;
  return (d.log2_abs() - abs(b).log2_abs()) * std::log10(2.0);
}

}  // namespace oracles
