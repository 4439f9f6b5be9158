#include "ellipgamma/report.hpp"

#include <cctype>
#include <chrono>
#include <cmath>

#include "ellipgamma/recognize.hpp"
#include "ellipgamma/units.hpp"

namespace ellipgamma {

using nlohmann::json;

int printed_decimals(const std::string& s) {
  const auto dot = s.find('.');
  if (dot == std::string::npos) return 0;
  std::size_t end = dot + 1;
  while (end < s.size() && std::isdigit(static_cast<unsigned char>(s[end]))) ++end;
  return static_cast<int>(end - dot - 1);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string sci(const BigReal& x) { return x.to_string(3); }

json complex_json(const BigComplex& v, int digits) {
  return {{"re", v.re().to_string(digits)}, {"im", v.im().to_string(digits)}};
}

double log10_of(const BigReal& x) {
  if (x.is_zero()) return -1e9;
  return x.log2_abs() * std::log10(2.0);
}

// A printed approximation matches when it differs from the value by less than
// one unit in its last printed decimal.
bool printed_match(const BigReal& value, const std::string& printed) {
  const int dec = printed_decimals(printed);
  const BigReal p = BigReal::parse(printed, value.prec());
  return abs(value - p) < pow10(-dec, value.prec());
}

json check(const char* name, bool passed, json detail) {
  detail["check"] = name;
  detail["passed"] = passed;
  return detail;
}

struct ClassResult {
  BigComplex value;
  json report;
  bool passed = true;
};

ClassResult run_class(const ExampleConfig& config, std::size_t index, const std::shared_ptr<const NumberField>& field,
                      const Embedding& emb, Precision prec, const RunOptions& opts) {
  const ClassConfig& cc = config.classes[index];
  UnitSpec spec = make_unit_spec(config, index, field);
  const int digits = opts.digits;
  const BigReal residual_limit = pow10(-(digits - 20), prec);
  json rep;
  rep["index"] = index;
  rep["k"] = cc.k;
  rep["label"] = cc.label;
  json checks = json::array();
  bool passed = true;

  const auto t0 = Clock::now();
  bool needs_search = opts.sign_search_reference.has_value();
  for (const auto& t : cc.terms) needs_search = needs_search || !t.nu;
  if (needs_search) {
    const std::optional<std::string> ref = opts.sign_search_reference ? opts.sign_search_reference : cc.reference.klf_value;
    if (!ref) throw Error(Errc::InvalidConfig, "class " + std::to_string(index) + ": sign search needs a klf_value");
    const double tol = std::max(1e-10, std::pow(10.0, -printed_decimals(*ref)));
    const SignSearchResult found = sign_search(spec, emb, BigReal::parse(*ref, prec), prec, tol, opts.gamma);
    for (std::size_t i = 0; i < spec.terms.size(); ++i) spec.terms[i].nu = found.signs[i];
    rep["sign_search"] = {{"reference", *ref}, {"tolerance", tol}, {"signs", found.signs}};
  }

  const UnitValue uv = eval_unit(spec, emb, prec, opts.gamma);
  const BigComplex& u = uv.value;
  rep["value"] = complex_json(u, digits);
  // Each term is accurate to 2^{-prec+24} relative.
  const BigReal rel_bound = pow2(-static_cast<long>(prec) + 24, 64) * static_cast<long>(spec.terms.size());
  rep["error_bound"] = sci(rel_bound * abs(u).with_prec(64));
  json terms = json::array();
  for (std::size_t i = 0; i < spec.terms.size(); ++i) {
    json tj = {{"nu", spec.terms[i].nu}, {"level", spec.terms[i].level.get_str()},
               {"value", complex_json(uv.term_values[i], std::min(digits, 20))}, {"seconds", uv.term_seconds[i]}};
    if (opts.oracle && !spec.terms[i].real_variant) {
      const Precision op = digits_to_bits(20);
      UnitTermSpec t = spec.terms[i];
      const GammaPoint pt = term_point(t, emb);
      GammaPoint scaled{pt.z * t.smoothing_N, {}};
      for (const auto& tau : pt.taus) scaled.taus.push_back(tau * t.smoothing_N);
      try {
        BigComplex ref = pow(gr_product(pt, op), t.smoothing_N) / gr_product(scaled, op);
        if (t.nu < 0) ref = inverse(ref);
        const BigReal diff = abs(ref - uv.term_values[i].with_prec(op)) / abs(ref);
        const bool ok = log10_of(diff) < -15;
        tj["oracle"] = {{"relative_difference", sci(diff)}, {"passed", ok}};
        passed = passed && ok;
      } catch (const Error& e) {
        tj["oracle"] = {{"skipped", e.what()}};
      }
    }
    terms.push_back(tj);
  }
  rep["terms"] = terms;

  const ReferenceConfig& ref = cc.reference;
  if (ref.value_re) {
    const bool ok = printed_match(u.re(), *ref.value_re) && printed_match(u.im(), *ref.value_im);
    checks.push_back(check("printed_value", ok, {{"reference", {{"re", *ref.value_re}, {"im", *ref.value_im}}}}));
    passed = passed && ok;
  }
  if (ref.absolute_poly) {
    const IntPolynomial poly(*ref.absolute_poly);
    const BigReal r = poly_residual(poly, u);
    const bool ok = r < residual_limit;
    checks.push_back(check("absolute_polynomial", ok,
                           {{"residual", sci(r)}, {"limit", sci(residual_limit)}, {"palindromic", palindrome_check(poly)}}));
    passed = passed && ok;
  }
  if (spec.reference.relative_poly) {
    std::vector<BigComplex> coeffs;
    for (const auto& c : *spec.reference.relative_poly) coeffs.push_back(emb(c).with_prec(prec));
    const BigReal r = poly_residual(coeffs, u);
    const bool ok = r < residual_limit;
    checks.push_back(check("relative_polynomial", ok,
                           {{"residual", sci(r)},
                            {"limit", sci(residual_limit)},
                            {"palindromic", palindrome_check(std::span<const NumberFieldElement>(*spec.reference.relative_poly))}}));
    passed = passed && ok;
  }
  const BigReal las = log_abs_sq(u);
  rep["log_abs_sq"] = las.to_string(std::min(digits, 30));
  if (ref.klf_value) {
    const bool ok = printed_match(las, *ref.klf_value);
    checks.push_back(check("klf_value", ok, {{"reference", *ref.klf_value}}));
    passed = passed && ok;
  }
  if (opts.recognize_maxdeg > 0) {
    try {
      const RecognitionResult r = algdep(u, opts.recognize_maxdeg, prec);
      json coeffs = json::array();
      for (const auto& c : r.coefficients) coeffs.push_back(c.get_str());
      const IntPolynomial poly(r.coefficients);
      rep["recognized"] = {{"coefficients", coeffs},
                           {"polynomial", poly.to_string()},
                           {"residual", sci(r.residual)},
                           {"certified", r.certified},
                           {"palindromic", palindrome_check(poly)}};
    } catch (const Error& e) {
      rep["recognized"] = {{"error", std::string(e.name())}};
    }
  }
  rep["checks"] = checks;
  rep["seconds"] = seconds_since(t0);
  rep["passed"] = passed;
  return {u, rep, passed};
}

json run_relation(const RelationConfig& r, const std::vector<std::optional<BigComplex>>& values, const Embedding& emb,
                  Precision prec, int digits) {
  json rep = {{"type", r.type}, {"classes", r.classes}};
  for (auto i : r.classes) {
    if (!values[i]) {
      rep["skipped"] = "class " + std::to_string(i) + " not evaluated";
      return rep;
    }
  }
  const BigReal limit = pow10(-(digits - 20), prec);
  bool ok = false;
  if (r.type == "inverse") {
    const BigReal d = abs(*values[r.classes[0]] * *values[r.classes[1]] - BigComplex(1L, prec));
    ok = d < limit;
    rep["difference"] = sci(d);
  } else if (r.type == "equal") {
    const BigComplex& a = *values[r.classes[0]];
    const BigReal d = abs(a - *values[r.classes[1]]) / abs(a);
    ok = d < limit;
    rep["difference"] = sci(d);
  } else {
    BigComplex s(prec);
    for (auto i : r.classes) s -= *values[i];
    const int n = emb.field().degree();
    std::vector<BigComplex> powers;
    BigComplex x(1L, emb.prec());
    for (int i = 0; i < n; ++i) {
      powers.push_back(x);
      x *= emb.root();
    }
    std::vector<mpq_class> want = r.expected;
    want.resize(static_cast<std::size_t>(n));
    try {
      const RelativeRecognition rr = relative_lindep(s, powers, prec);
      json got = json::array();
      for (const auto& c : rr.coords) got.push_back(rational_to_string(c));
      rep["recovered"] = got;
      rep["certified"] = rr.certified;
      rep["residual"] = sci(rr.residual);
      ok = rr.certified && rr.coords == want;
    } catch (const Error& e) {
      rep["error"] = std::string(e.name());
    }
  }
  rep["limit"] = sci(limit);
  rep["passed"] = ok;
  return rep;
}

}  // namespace

json run_example(const ExampleConfig& config, const RunOptions& opts) {
  if (opts.digits < 25) throw Error(Errc::InvalidArgument, "at least 25 digits are required");
  const auto t0 = Clock::now();
  const Precision prec = digits_to_bits(opts.digits) + 32;
  const auto field = make_field(config);
  const Embedding emb(field, embedding_precision(prec));

  json report;
  report["schema"] = kSchemaVersion;
  report["example"] = config.name;
  report["digits"] = opts.digits;
  report["embedding"] = complex_json(emb.root(), opts.digits);
  bool passed = true;
  std::vector<std::optional<BigComplex>> values(config.classes.size());
  json classes = json::array();
  bool any = false;
  for (std::size_t i = 0; i < config.classes.size(); ++i) {
    if (opts.only_k && *opts.only_k != config.classes[i].k) continue;
    if (opts.only_label && *opts.only_label != config.classes[i].label) continue;
    any = true;
    ClassResult r = run_class(config, i, field, emb, prec, opts);
    values[i] = std::move(r.value);
    passed = passed && r.passed;
    classes.push_back(std::move(r.report));
  }
  if (!any) throw Error(Errc::InvalidArgument, "no class of " + config.name + " matches the selection");
  report["classes"] = classes;
  json rel = json::array();
  for (const auto& r : config.relations) {
    json rr = run_relation(r, values, emb, prec, opts.digits);
    if (rr.contains("passed")) passed = passed && rr["passed"].get<bool>();
    rel.push_back(std::move(rr));
  }
  report["relations"] = rel;
  report["seconds"] = seconds_since(t0);
  report["passed"] = passed;
  return report;
}

json strip_timings(json report) {
  if (report.is_object()) {
    report.erase("seconds");
    for (auto& [key, value] : report.items()) value = strip_timings(value);
  } else if (report.is_array()) {
    for (auto& v : report) v = strip_timings(v);
  }
  return report;
}

}  // namespace ellipgamma
