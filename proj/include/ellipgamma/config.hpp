#pragma once

// JSON description of a worked example: the field, the unit terms of each
// class, and the printed reference data the computed values are checked against.
// Field elements are exact rational coefficient arrays on the power basis
// (lowest degree first); rationals and big integers are strings.

#include <gmpxx.h>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ellipgamma/units.hpp"

namespace ellipgamma {

inline constexpr int kSchemaVersion = 1;

struct TermConfig {
  std::vector<std::vector<mpq_class>> taus;
  mpz_class level = 1;
  /// First argument k*m/q + delta/level.
  mpq_class m = 1;
  std::vector<mpq_class> delta;
  /// Absent means the sign is to be found by sign_search.
  std::optional<int> nu = 1;
  bool real_variant = false;
};

struct ReferenceConfig {
  std::optional<std::string> value_re, value_im;
  std::optional<std::vector<mpz_class>> absolute_poly;
  std::optional<std::vector<std::vector<mpq_class>>> relative_poly;
  std::optional<std::string> klf_value;
};

struct ClassConfig {
  long k = 1;
  std::string label;
  std::vector<TermConfig> terms;
  ReferenceConfig reference;
};

/// Identity between the values of several classes.
///   inverse: u_a * u_b = 1;  equal: u_a = u_b;
///   sum: -(sum of the listed values) has power-basis coordinates `expected`.
struct RelationConfig {
  std::string type;
  std::vector<std::size_t> classes;
  std::vector<mpq_class> expected;
};

struct ExampleConfig {
  int schema = kSchemaVersion;
  std::string name;
  std::string description;
  std::vector<mpz_class> polynomial;
  std::optional<std::vector<std::vector<mpq_class>>> integral_basis;
  long q = 1;
  long smoothing_N = 2;
  std::vector<ClassConfig> classes;
  std::vector<RelationConfig> relations;
};

/// Throws Errc::InvalidConfig with the offending path.
ExampleConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExampleConfig& c);
ExampleConfig load_config(const std::filesystem::path& path);
std::vector<std::filesystem::path> bundled_configs(const std::filesystem::path& dir);

std::shared_ptr<const NumberField> make_field(const ExampleConfig& c);
/// Unit specification for classes[index]; terms whose sign is to be searched get nu = +1.
UnitSpec make_unit_spec(const ExampleConfig& c, std::size_t index, const std::shared_ptr<const NumberField>& field);

mpq_class parse_rational(const std::string& s);
std::string rational_to_string(const mpq_class& q);

}  // namespace ellipgamma
