// Command-line front end: gamma, unit, verify-all and nfield subcommands.
// Exit status 0 on success, 1 when a verification fails, 2 on input or domain errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ellipgamma/config.hpp"
#include "ellipgamma/gamma.hpp"
#include "ellipgamma/nfield.hpp"
#include "ellipgamma/recognize.hpp"
#include "ellipgamma/report.hpp"
#include "ellipgamma/units.hpp"

using namespace ellipgamma;
using nlohmann::json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitError = 2;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

std::vector<mpq_class> parse_rationals(const std::string& s) {
  std::vector<mpq_class> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw Error(Errc::InvalidArgument, "empty coefficient list");
  return out;
}

std::vector<mpz_class> parse_integers(const std::string& s) {
  std::vector<mpz_class> out;
  for (const auto& q : parse_rationals(s)) {
    if (q.get_den() != 1) throw Error(Errc::InvalidArgument, "expected integers in '" + s + "'");
    out.push_back(q.get_num());
  }
  return out;
}

std::shared_ptr<const NumberField> parse_field(const std::string& poly, const std::string& basis) {
  std::optional<std::vector<std::vector<mpq_class>>> b;
  if (!basis.empty()) {
    b.emplace();
    for (const auto& row : split(basis, ';')) b->push_back(parse_rationals(row));
  }
  return NumberField::create(IntPolynomial(parse_integers(poly)), b);
}

NumberFieldElement parse_element(const NumberField& f, const std::string& s) {
  auto c = parse_rationals(s);
  if (c.size() > static_cast<std::size_t>(f.degree())) throw Error(Errc::InvalidArgument, "element '" + s + "' too long");
  c.resize(static_cast<std::size_t>(f.degree()));
  return f.element(std::move(c));
}

std::string format_complex(const BigComplex& v, int digits) {
  std::string im = v.im().to_string(digits);
  const bool neg = !im.empty() && im[0] == '-';
  return v.re().to_string(digits) + (neg ? " - " : " + ") + (neg ? im.substr(1) : im) + "i";
}

std::filesystem::path default_config_dir() {
  if (const char* env = std::getenv("ELLIPGAMMA_DATA_DIR")) return std::filesystem::path(env) / "examples";
  return std::filesystem::path(ELLIPGAMMA_DATA_DIR) / "examples";
}

// A bundled example name or a path to a config file.
std::filesystem::path resolve_config(const std::string& name_or_path) {
  const std::filesystem::path p(name_or_path);
  if (std::filesystem::exists(p)) return p;
  const auto bundled = default_config_dir() / (name_or_path + ".json");
  if (std::filesystem::exists(bundled)) return bundled;
  throw Error(Errc::InvalidConfig, "no config file or bundled example named '" + name_or_path + "'");
}

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path);
  out << j.dump(2) << "\n";
}

// ---- gamma ----

struct GammaArgs {
  std::string z;
  std::vector<std::string> taus;
  int r = -1;
  int digits = 50;
  std::string poly;
  long smooth = 0;
  bool real_variant = false;
  bool oracle = false;
  bool json_out = false;
};

// With a field: "c0,c1,...[;level]" on the power basis, embedded at the upper root.
BigComplex parse_point(const std::string& s, const std::shared_ptr<const NumberField>& field,
                       const std::optional<Embedding>& emb, Precision prec) {
  if (!field) return BigComplex::parse(s, prec);
  const auto parts = split(s, ';');
  if (parts.empty() || parts.size() > 2) throw Error(Errc::InvalidArgument, "malformed field point '" + s + "'");
  BigComplex v = (*emb)(parse_element(*field, parts[0]));
  if (parts.size() == 2) v = v / BigReal(parse_rational(parts[1]), v.prec());
  return v;
}

int cmd_gamma(const GammaArgs& a) {
  const Precision prec = digits_to_bits(a.digits) + 16;
  std::shared_ptr<const NumberField> field;
  std::optional<Embedding> emb;
  if (!a.poly.empty()) {
    field = NumberField::create(IntPolynomial(parse_integers(a.poly)));
    emb.emplace(field, embedding_precision(prec));
  }
  GammaPoint p{parse_point(a.z, field, emb, 2 * prec), {}};
  for (const auto& t : a.taus) {
    BigComplex v = parse_point(t, field, emb, 2 * prec);
    if (a.real_variant && field && v.im().log2_abs() < abs(v).log2_abs() - static_cast<double>(prec)) {
      v.im() = BigReal(0L, v.prec());
    }
    p.taus.push_back(std::move(v));
  }
  if (a.r >= 0 && a.r != p.r()) {
    throw Error(Errc::InvalidArgument, "r = " + std::to_string(a.r) + " needs " + std::to_string(a.r + 1) + " parameters");
  }
  auto eval = [&](const GammaPoint& q, Precision pr) {
    if (a.real_variant) return gr_real_variant(q.z, q.taus, pr);
    return gr(q, pr);
  };
  const auto t0 = std::chrono::steady_clock::now();
  BigComplex v = eval(p, prec);
  if (a.smooth > 0) {
    GammaPoint s{p.z * a.smooth, {}};
    for (const auto& t : p.taus) s.taus.push_back(t * a.smooth);
    v = pow(v, a.smooth) / eval(s, prec);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const BigReal bound = pow2(-static_cast<long>(prec) + 24, 64) * abs(v).with_prec(64) * (a.smooth > 0 ? a.smooth + 1 : 1);

  json out = {{"r", p.r()}, {"digits", a.digits}, {"value", {{"re", v.re().to_string(a.digits)}, {"im", v.im().to_string(a.digits)}}},
              {"error_bound", bound.to_string(3)}, {"seconds", secs}};
  bool passed = true;
  if (a.oracle) {
    const Precision op = digits_to_bits(20);
    BigComplex ref = gr_product(p, op);
    if (a.smooth > 0) {
      GammaPoint s{p.z * a.smooth, {}};
      for (const auto& t : p.taus) s.taus.push_back(t * a.smooth);
      ref = pow(ref, a.smooth) / gr_product(s, op);
    }
    const BigReal diff = abs(ref - v.with_prec(op)) / abs(ref);
    passed = diff.is_zero() || diff.log2_abs() * std::log10(2.0) < -15;
    out["oracle"] = {{"relative_difference", diff.to_string(3)}, {"passed", passed}};
  }
  if (a.json_out) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "value        " << format_complex(v, a.digits) << "\n";
    std::cout << "error bound  " << bound.to_string(3) << "\n";
    if (a.oracle) std::cout << "oracle       " << out["oracle"]["relative_difference"].get<std::string>()
                            << (passed ? " (agrees)" : " (DISAGREES)") << "\n";
  }
  return passed ? 0 : kExitFail;
}

// ---- unit / verify-all ----

struct UnitArgs {
  std::string config;
  std::optional<long> k;
  std::optional<std::string> label;
  int digits = 50;
  int recognize = 0;
  std::optional<std::string> sign_search;
  bool oracle = false;
  std::string output;
};

void print_class_summary(const json& c) {
  std::cout << "  k=" << c["k"].get<long>() << " " << c["label"].get<std::string>() << "  "
            << c["value"]["re"].get<std::string>() << " " << c["value"]["im"].get<std::string>() << "i  "
            << (c["passed"].get<bool>() ? "ok" : "FAIL") << "\n";
  for (const auto& ch : c["checks"]) {
    std::cout << "    " << ch["check"].get<std::string>() << ": " << (ch["passed"].get<bool>() ? "ok" : "FAIL");
    if (ch.contains("residual")) std::cout << "  residual " << ch["residual"].get<std::string>();
    std::cout << "\n";
  }
}

int cmd_unit(const UnitArgs& a) {
  const ExampleConfig cfg = load_config(resolve_config(a.config));
  RunOptions opts;
  opts.digits = a.digits;
  opts.only_k = a.k;
  opts.only_label = a.label;
  opts.recognize_maxdeg = a.recognize;
  opts.sign_search_reference = a.sign_search;
  opts.oracle = a.oracle;
  const json report = run_example(cfg, opts);
  if (!a.output.empty()) {
    write_json(report, a.output);
    if (a.output != "-") {
      std::cout << cfg.name << ": " << (report["passed"].get<bool>() ? "passed" : "FAILED") << "\n";
      for (const auto& c : report["classes"]) print_class_summary(c);
    }
  } else {
    write_json(report, "-");
  }
  return report["passed"].get<bool>() ? 0 : kExitFail;
}

struct VerifyArgs {
  int digits = 50;
  std::string config_dir;
  std::string output_dir;
};

int cmd_verify_all(const VerifyArgs& a) {
  const auto dir = a.config_dir.empty() ? default_config_dir() : std::filesystem::path(a.config_dir);
  if (!a.output_dir.empty()) std::filesystem::create_directories(a.output_dir);
  bool all = true;
  std::printf("%-24s %-6s %-12s %s\n", "example", "result", "seconds", "worst residual");
  for (const auto& path : bundled_configs(dir)) {
    std::string name = path.stem().string();
    std::string result, worst = "-";
    double secs = 0;
    try {
      const ExampleConfig cfg = load_config(path);
      name = cfg.name;
      RunOptions opts;
      opts.digits = a.digits;
      const json report = run_example(cfg, opts);
      secs = report["seconds"].get<double>();
      const bool ok = report["passed"].get<bool>();
      result = ok ? "pass" : "FAIL";
      all = all && ok;
      double w = -1e300;
      for (const auto& c : report["classes"])
        for (const auto& ch : c["checks"])
          if (ch.contains("residual")) {
            const double r = std::stod(ch["residual"].get<std::string>());
            if (r > w) {
              w = r;
              worst = ch["residual"].get<std::string>();
            }
          }
      if (!a.output_dir.empty()) write_json(report, (std::filesystem::path(a.output_dir) / (cfg.name + ".json")).string());
    } catch (const Error& e) {
      result = "ERROR";
      worst = std::string(e.name());
      all = false;
    }
    std::printf("%-24s %-6s %-12.2f %s\n", name.c_str(), result.c_str(), secs, worst.c_str());
    std::fflush(stdout);
  }

  // Identity suites at a few fixed points.
  const Precision p = digits_to_bits(a.digits);
  const auto t0 = std::chrono::steady_clock::now();
  BigReal worst(0L, 64);
  auto track = [&](const BigReal& r) {
    if (r.with_prec(64) > worst) worst = r.with_prec(64);
  };
  const std::vector<BigComplex> om{BigComplex(1L, p), BigComplex::parse("0.3+0.7i", p), BigComplex::parse("-0.4+0.9i", p)};
  track(modular_check(BigComplex::parse("0.2+0.1i", p), om, p));
  const std::vector<BigComplex> om4{BigComplex(1L, p), BigComplex::parse("0.2+0.8i", p),
                                    BigComplex::parse("-0.5+0.6i", p), BigComplex::parse("0.7+1.1i", p)};
  track(modular_check(BigComplex::parse("0.15+0.05i", p), om4, p));
  const GammaPoint g{BigComplex::parse("0.3+0.4i", p), {BigComplex::parse("0.1+0.5i", p), BigComplex::parse("-0.2+0.7i", p)}};
  const BigComplex v = gr(g, p);
  GammaPoint shifted = g;
  shifted.z += g.taus[0];
  track(abs(gr(shifted, p) / v / theta(g.z, g.taus[1], p) - BigComplex(1L, p)));
  GammaPoint flipped{g.z - g.taus[0], {-g.taus[0], g.taus[1]}};
  track(abs(gr(flipped, p) * v - BigComplex(1L, p)));
  const bool props = worst.is_zero() || worst.log2_abs() * std::log10(2.0) < -(a.digits - 20);
  all = all && props;
  std::printf("%-24s %-6s %-12.2f %s\n", "identities", props ? "pass" : "FAIL",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), worst.to_string(3).c_str());
  return all ? 0 : kExitFail;
}

// ---- nfield ----

struct NfieldArgs {
  std::string poly;
  std::string basis;
  bool trace = false;
  std::vector<std::string> units;
  std::vector<std::string> alphas;
  std::string line;
  std::string lattice;
  std::string lambda;
  std::vector<std::string> primes;
};

FractionalIdealHNF different_from_args(const NfieldArgs& a) {
  if (a.poly.empty()) throw Error(Errc::InvalidArgument, "--poly is required");
  const auto field = parse_field(a.poly, a.basis);
  std::vector<mpq_class> ell;
  if (a.trace == !a.units.empty()) throw Error(Errc::InvalidArgument, "give exactly one of --trace or --unit");
  if (a.trace) {
    ell = trace_form_values(*field);
  } else {
    std::vector<NumberFieldElement> eps;
    for (const auto& u : a.units) eps.push_back(parse_element(*field, u));
    const auto etas = cumulative_products(eps);
    ell = det_form_values(*field, etas);
  }
  return different_of_form(*field, ell);
}

int cmd_nfield(const std::string& sub, const NfieldArgs& a) {
  if (sub == "different") {
    const auto d = different_from_args(a);
    std::cout << "hnf\n" << to_string(d.numerator_hnf()) << "\n";
    std::cout << "denominator  " << d.denominator().get_str() << "\n";
    std::cout << "norm         " << d.norm().get_str() << "\n";
    if (d.is_integral()) {
      std::cout << "lambda       " << lambda_tilde(d).get_str() << "\n";
      std::cout << "t            " << t_tilde(d).get_str() << "\n";
    }
    return 0;
  }
  if (sub == "lambda" || sub == "ttilde") {
    const auto d = different_from_args(a);
    if (!d.is_integral()) throw Error(Errc::InvalidArgument, "the different ideal is not integral");
    std::cout << (sub == "lambda" ? lambda_tilde(d) : t_tilde(d)).get_str() << "\n";
    return 0;
  }
  if (sub == "parallelepiped") {
    std::vector<std::vector<mpz_class>> alphas;
    for (const auto& s : a.alphas) alphas.push_back(parse_integers(s));
    if (a.line.empty()) throw Error(Errc::InvalidArgument, "--line is required");
    const auto line = parse_integers(a.line);
    IntegerMatrix lattice = IntegerMatrix::identity(line.size());
    if (!a.lattice.empty()) {
      std::vector<std::vector<mpz_class>> cols;
      for (const auto& c : split(a.lattice, ';')) cols.push_back(parse_integers(c));
      lattice = IntegerMatrix::from_columns(cols);
    }
    const auto pts = parallelepiped_points(alphas, line, lattice);
    std::cout << "count " << pts.ambient.size() << "\n";
    for (const auto& v : pts.ambient) {
      for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? " " : "") << v[i].get_str();
      std::cout << "\n";
    }
    return 0;
  }
  if (sub == "tmin") {
    const mpz_class lambda = a.lambda.empty() ? mpz_class(1) : parse_integers(a.lambda).at(0);
    std::vector<std::pair<mpz_class, unsigned long>> pv;
    for (const auto& s : a.primes) {
      const auto parts = split(s, ':');
      if (parts.size() != 2) throw Error(Errc::InvalidArgument, "expected p:v, got '" + s + "'");
      pv.emplace_back(parse_integers(parts[0]).at(0), std::stoul(parts[1]));
    }
    std::cout << t_min(lambda, pv).get_str() << "\n";
    return 0;
  }
  throw Error(Errc::InvalidArgument, "unknown nfield subcommand '" + sub + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiple elliptic Gamma functions and higher elliptic units"};
  app.require_subcommand(1);

  GammaArgs ga;
  auto* gamma = app.add_subcommand("gamma", "Evaluate G_r(z; tau_0, ..., tau_r)");
  gamma->add_option("--z", ga.z, "First argument (complex, or field element with --poly)")->required();
  gamma->add_option("--tau", ga.taus, "Parameter, repeated r+1 times")->required();
  gamma->add_option("--r", ga.r, "Expected r (checked against the parameter count)");
  gamma->add_option("--digits", ga.digits, "Decimal digits")->check(CLI::Range(10, 100000));
  gamma->add_option("--poly", ga.poly, "Defining polynomial c0,c1,...; points become c0,c1,...[;level] at its upper root");
  gamma->add_option("--smooth", ga.smooth, "Return G(z,tau)^N / G(Nz, N tau)")->check(CLI::PositiveNumber);
  gamma->add_flag("--real-variant", ga.real_variant, "G_2 by the trigonometric series (one real parameter)");
  gamma->add_flag("--oracle", ga.oracle, "Cross-check against the truncated defining product");
  gamma->add_flag("--json", ga.json_out, "Print JSON");

  UnitArgs ua;
  auto* unit = app.add_subcommand("unit", "Evaluate the units of an example config and write its report");
  unit->add_option("--config", ua.config, "Config file or bundled example name")->required();
  unit->add_option("--class", ua.k, "Only classes with this k");
  unit->add_option("--label", ua.label, "Only classes with this label");
  unit->add_option("--digits", ua.digits, "Decimal digits")->check(CLI::Range(25, 100000));
  unit->add_option("--recognize", ua.recognize, "Run algdep up to this degree")->check(CLI::NonNegativeNumber);
  unit->add_option("--sign-search", ua.sign_search, "Search the term signs against this log|u|^2");
  unit->add_flag("--oracle", ua.oracle, "Cross-check terms against truncated products");
  unit->add_option("--output", ua.output, "Write the JSON report here ('-' for stdout) and print a summary");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify-all", "Run every bundled example and the identity checks");
  verify->add_option("--digits", va.digits, "Decimal digits")->check(CLI::Range(25, 100000));
  verify->add_option("--config-dir", va.config_dir, "Directory of example configs");
  verify->add_option("--output-dir", va.output_dir, "Write one report per example here");

  NfieldArgs na;
  std::string nsub;
  auto* nfield = app.add_subcommand("nfield", "Exact number field computations");
  nfield->add_option("subcommand", nsub, "different | lambda | ttilde | parallelepiped | tmin")
      ->required()
      ->check(CLI::IsMember({"different", "lambda", "ttilde", "parallelepiped", "tmin"}));
  nfield->add_option("--poly", na.poly, "Defining polynomial c0,c1,...");
  nfield->add_option("--basis", na.basis, "Integral basis rows on the power basis, ';' separated");
  nfield->add_flag("--trace", na.trace, "Use the trace form");
  nfield->add_option("--unit", na.units, "Unit eps_j (power-basis coefficients); the form is det(1, eta_1, ..., x)");
  nfield->add_option("--alpha", na.alphas, "Cone generator (integer vector), repeated");
  nfield->add_option("--line", na.line, "Line generator (integer vector)");
  nfield->add_option("--lattice", na.lattice, "Lattice basis columns, ';' separated (default identity)");
  nfield->add_option("--lambda", na.lambda, "lambda for tmin");
  nfield->add_option("--prime", na.primes, "p:v for tmin, repeated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*gamma) return cmd_gamma(ga);
    if (*unit) return cmd_unit(ua);
    if (*verify) return cmd_verify_all(va);
    if (*nfield) return cmd_nfield(nsub, na);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: InvalidArgument: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
