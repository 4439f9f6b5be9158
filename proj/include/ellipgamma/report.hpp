#pragma once

// Evaluation of a configured example and the machine-readable report of the
// values, residuals and reference comparisons.

#include <optional>
#include <string>

#include <json.hpp>

#include "ellipgamma/config.hpp"
#include "ellipgamma/gamma.hpp"

namespace ellipgamma {

struct RunOptions {
  int digits = 50;
  /// Only classes with this k and/or this label.
  std::optional<long> only_k;
  std::optional<std::string> only_label;
  /// Run algdep with this maximal degree on each value (0: off).
  int recognize_maxdeg = 0;
  /// Search the term signs against this log|u|^2 instead of the configured signs.
  std::optional<std::string> sign_search_reference;
  /// Cross-check every term against the truncated defining product at low precision.
  bool oracle = false;
  GammaOptions gamma;
};

/// Decimals after the point in a printed number ("3.7519563" -> 7).
int printed_decimals(const std::string& s);

/// Evaluates the example and returns its report (schema 1). The "passed" member
/// is false when any comparison with a reference fails.
nlohmann::json run_example(const ExampleConfig& config, const RunOptions& opts);

/// The report without timing members, for comparisons across runs.
nlohmann::json strip_timings(nlohmann::json report);

}  // namespace ellipgamma
