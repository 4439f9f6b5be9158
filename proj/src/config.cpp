#include "ellipgamma/config.hpp"

#include <algorithm>
#include <fstream>

namespace ellipgamma {

using nlohmann::json;

mpq_class parse_rational(const std::string& s) {
  std::string t;
  for (char c : s)
    if (c != ' ') t.push_back(c);
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  mpq_class q;
  if (t.empty() || q.set_str(t, 10) != 0 || q.get_den() == 0) {
    throw Error(Errc::InvalidConfig, "malformed rational '" + s + "'");
  }
  q.canonicalize();
  return q;
}

std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(Errc::InvalidConfig, path + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) fail(path, std::string("missing '") + key + "'");
  return j.at(key);
}

mpq_class rational_at(const json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return mpq_class(j.get<long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    fail(path, e.what());
  }
  fail(path, "expected an integer or a rational string");
}

mpz_class integer_at(const json& j, const std::string& path) {
  const mpq_class q = rational_at(j, path);
  if (q.get_den() != 1) fail(path, "expected an integer");
  return q.get_num();
}

long long_at(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

std::vector<mpq_class> rationals_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<mpq_class> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_at(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::vector<mpq_class>> rational_rows_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of arrays");
  std::vector<std::vector<mpq_class>> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rationals_at(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::string string_at(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

json rationals_json(const std::vector<mpq_class>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(rational_to_string(q));
  return a;
}

json rows_json(const std::vector<std::vector<mpq_class>>& rows) {
  json a = json::array();
  for (const auto& r : rows) a.push_back(rationals_json(r));
  return a;
}

TermConfig term_from_json(const json& j, const std::string& path) {
  TermConfig t;
  t.taus = rational_rows_at(member(j, "taus", path), path + ".taus");
  t.level = integer_at(member(j, "level", path), path + ".level");
  if (t.level <= 0) fail(path + ".level", "must be positive");
  if (j.contains("m")) t.m = rational_at(j.at("m"), path + ".m");
  if (j.contains("delta")) t.delta = rationals_at(j.at("delta"), path + ".delta");
  if (j.contains("nu")) {
    const json& nu = j.at("nu");
    if (nu.is_string() && nu.get<std::string>() == "search") {
      t.nu.reset();
    } else {
      const long v = long_at(nu, path + ".nu");
      if (v != 1 && v != -1) fail(path + ".nu", "must be 1, -1 or \"search\"");
      t.nu = static_cast<int>(v);
    }
  }
  if (j.contains("real_variant")) {
    if (!j.at("real_variant").is_boolean()) fail(path + ".real_variant", "expected a boolean");
    t.real_variant = j.at("real_variant").get<bool>();
  }
  return t;
}

ReferenceConfig reference_from_json(const json& j, const std::string& path) {
  ReferenceConfig r;
  if (!j.is_object()) fail(path, "expected an object");
  if (j.contains("value")) {
    const json& v = j.at("value");
    r.value_re = string_at(member(v, "re", path + ".value"), path + ".value.re");
    r.value_im = string_at(member(v, "im", path + ".value"), path + ".value.im");
    BigReal::parse(*r.value_re, 64);
    BigReal::parse(*r.value_im, 64);
  }
  if (j.contains("absolute_poly")) {
    std::vector<mpz_class> c;
    const json& a = j.at("absolute_poly");
    if (!a.is_array()) fail(path + ".absolute_poly", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) c.push_back(integer_at(a[i], path + ".absolute_poly[" + std::to_string(i) + "]"));
    r.absolute_poly = std::move(c);
  }
  if (j.contains("relative_poly")) r.relative_poly = rational_rows_at(j.at("relative_poly"), path + ".relative_poly");
  if (j.contains("klf_value")) {
    r.klf_value = string_at(j.at("klf_value"), path + ".klf_value");
    BigReal::parse(*r.klf_value, 64);
  }
  return r;
}

json reference_to_json(const ReferenceConfig& r) {
  json j = json::object();
  if (r.value_re) j["value"] = {{"re", *r.value_re}, {"im", *r.value_im}};
  if (r.absolute_poly) {
    json a = json::array();
    for (const auto& c : *r.absolute_poly) a.push_back(c.get_str());
    j["absolute_poly"] = a;
  }
  if (r.relative_poly) j["relative_poly"] = rows_json(*r.relative_poly);
  if (r.klf_value) j["klf_value"] = *r.klf_value;
  return j;
}

}  // namespace

ExampleConfig config_from_json(const json& j) {
  ExampleConfig c;
  const std::string root = "$";
  c.schema = static_cast<int>(long_at(member(j, "schema", root), "$.schema"));
  if (c.schema != kSchemaVersion) fail("$.schema", "unsupported schema version " + std::to_string(c.schema));
  c.name = string_at(member(j, "name", root), "$.name");
  if (j.contains("description")) c.description = string_at(j.at("description"), "$.description");
  const json& field = member(j, "field", root);
  {
    const json& p = member(field, "polynomial", "$.field");
    if (!p.is_array() || p.size() < 2) fail("$.field.polynomial", "expected at least two coefficients");
    for (std::size_t i = 0; i < p.size(); ++i)
      c.polynomial.push_back(integer_at(p[i], "$.field.polynomial[" + std::to_string(i) + "]"));
    if (c.polynomial.back() == 0) fail("$.field.polynomial", "leading coefficient is zero");
    if (field.contains("integral_basis"))
      c.integral_basis = rational_rows_at(field.at("integral_basis"), "$.field.integral_basis");
  }
  const std::size_t n = c.polynomial.size() - 1;
  c.q = long_at(member(j, "q", root), "$.q");
  c.smoothing_N = long_at(member(j, "smoothing_N", root), "$.smoothing_N");
  if (c.q < 1) fail("$.q", "must be positive");
  if (c.smoothing_N < 2) fail("$.smoothing_N", "must be at least 2");

  const json& classes = member(j, "classes", root);
  if (!classes.is_array() || classes.empty()) fail("$.classes", "expected a nonempty array");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const std::string path = "$.classes[" + std::to_string(i) + "]";
    const json& cj = classes[i];
    ClassConfig cc;
    cc.k = long_at(member(cj, "k", path), path + ".k");
    if (cj.contains("label")) cc.label = string_at(cj.at("label"), path + ".label");
    const json& terms = member(cj, "terms", path);
    if (!terms.is_array() || terms.empty()) fail(path + ".terms", "expected a nonempty array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tp = path + ".terms[" + std::to_string(t) + "]";
      TermConfig term = term_from_json(terms[t], tp);
      if (term.taus.size() + 1 != n) fail(tp + ".taus", "expected " + std::to_string(n - 1) + " parameters");
      for (const auto& tau : term.taus)
        if (tau.size() > n) fail(tp + ".taus", "coefficient array longer than the field degree");
      if (term.delta.size() > n) fail(tp + ".delta", "coefficient array longer than the field degree");
      cc.terms.push_back(std::move(term));
    }
    if (cj.contains("reference")) cc.reference = reference_from_json(cj.at("reference"), path + ".reference");
    c.classes.push_back(std::move(cc));
  }
  if (j.contains("relations")) {
    const json& rel = j.at("relations");
    if (!rel.is_array()) fail("$.relations", "expected an array");
    for (std::size_t i = 0; i < rel.size(); ++i) {
      const std::string path = "$.relations[" + std::to_string(i) + "]";
      RelationConfig r;
      r.type = string_at(member(rel[i], "type", path), path + ".type");
      const json& idx = member(rel[i], "classes", path);
      if (!idx.is_array()) fail(path + ".classes", "expected an array");
      for (const auto& x : idx) {
        const long v = long_at(x, path + ".classes");
        if (v < 0 || static_cast<std::size_t>(v) >= c.classes.size()) fail(path + ".classes", "index out of range");
        r.classes.push_back(static_cast<std::size_t>(v));
      }
      if (r.type == "inverse" || r.type == "equal") {
        if (r.classes.size() != 2) fail(path + ".classes", "expected two class indices");
      } else if (r.type == "sum") {
        r.expected = rationals_at(member(rel[i], "expected", path), path + ".expected");
      } else {
        fail(path + ".type", "unknown relation '" + r.type + "'");
      }
      c.relations.push_back(std::move(r));
    }
  }
  return c;
}

json config_to_json(const ExampleConfig& c) {
  json j;
  j["schema"] = c.schema;
  j["name"] = c.name;
  if (!c.description.empty()) j["description"] = c.description;
  json field;
  json poly = json::array();
  for (const auto& x : c.polynomial) poly.push_back(x.get_str());
  field["polynomial"] = poly;
  if (c.integral_basis) field["integral_basis"] = rows_json(*c.integral_basis);
  j["field"] = field;
  j["q"] = c.q;
  j["smoothing_N"] = c.smoothing_N;
  json classes = json::array();
  for (const auto& cc : c.classes) {
    json cj;
    cj["k"] = cc.k;
    cj["label"] = cc.label;
    json terms = json::array();
    for (const auto& t : cc.terms) {
      json tj;
      tj["taus"] = rows_json(t.taus);
      tj["level"] = t.level.get_str();
      tj["m"] = rational_to_string(t.m);
      if (!t.delta.empty()) tj["delta"] = rationals_json(t.delta);
      if (t.nu) {
        tj["nu"] = *t.nu;
      } else {
        tj["nu"] = "search";
      }
      tj["real_variant"] = t.real_variant;
      terms.push_back(tj);
    }
    cj["terms"] = terms;
    const json ref = reference_to_json(cc.reference);
    if (!ref.empty()) cj["reference"] = ref;
    classes.push_back(cj);
  }
  j["classes"] = classes;
  if (!c.relations.empty()) {
    json rel = json::array();
    for (const auto& r : c.relations) {
      json rj;
      rj["type"] = r.type;
      rj["classes"] = r.classes;
      if (!r.expected.empty()) rj["expected"] = rationals_json(r.expected);
      rel.push_back(rj);
    }
    j["relations"] = rel;
  }
  return j;
}

ExampleConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

std::vector<std::filesystem::path> bundled_configs(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) throw Error(Errc::InvalidConfig, "no config directory " + dir.string());
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".json") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::shared_ptr<const NumberField> make_field(const ExampleConfig& c) {
  return NumberField::create(IntPolynomial(c.polynomial), c.integral_basis);
}

UnitSpec make_unit_spec(const ExampleConfig& c, std::size_t index, const std::shared_ptr<const NumberField>& field) {
  if (index >= c.classes.size()) throw Error(Errc::InvalidArgument, "class index out of range");
  const ClassConfig& cc = c.classes[index];
  const std::size_t n = static_cast<std::size_t>(field->degree());
  auto element = [&](std::vector<mpq_class> v) {
    v.resize(n);
    return field->element(std::move(v));
  };
  UnitSpec u;
  u.field = field;
  u.k = cc.k;
  u.label = cc.label;
  for (const auto& t : cc.terms) {
    UnitTermSpec s;
    for (const auto& tau : t.taus) s.taus.push_back(element(tau));
    s.level = t.level;
    s.arg_rational = mpq_class(cc.k) * t.m / c.q;
    s.arg_rational.canonicalize();
    if (!t.delta.empty()) s.arg_delta = element(t.delta);
    s.nu = t.nu.value_or(1);
    s.smoothing_N = c.smoothing_N;
    s.real_variant = t.real_variant;
    u.terms.push_back(std::move(s));
  }
  const ReferenceConfig& r = cc.reference;
  u.reference.value_re = r.value_re;
  u.reference.value_im = r.value_im;
  if (r.absolute_poly) u.reference.absolute_poly = IntPolynomial(*r.absolute_poly);
  if (r.relative_poly) {
    std::vector<NumberFieldElement> rel;
    for (const auto& coeff : *r.relative_poly) rel.push_back(element(coeff));
    u.reference.relative_poly = std::move(rel);
  }
  u.reference.klf_value = r.klf_value;
  return u;
}

}  // namespace ellipgamma
