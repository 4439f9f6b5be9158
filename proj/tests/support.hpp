#pragma once

#include <cmath>
#include <limits>

#include "ellipgamma/mpnum.hpp"

namespace testsupport {

using namespace ellipgamma;

/// log2 of |a - b| / max(|b|, 1).
inline double log2_rel_diff(const BigComplex& a, const BigComplex& b) {
  const BigReal d = abs(a - b);
  if (d.is_zero()) return -std::numeric_limits<double>::infinity();
  return d.log2_abs() - std::max(0.0, abs(b).log2_abs());
}

inline double log2_abs_diff(const BigComplex& a, const BigComplex& b) {
  const BigReal d = abs(a - b);
  return d.is_zero() ? -std::numeric_limits<double>::infinity() : d.log2_abs();
}

inline BigComplex cx(const char* text, Precision prec) { return BigComplex::parse(text, prec); }

}  // namespace testsupport
