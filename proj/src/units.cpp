#include "ellipgamma/units.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace ellipgamma {

Precision embedding_precision(Precision prec) { return 2 * prec + 64; }

Embedding::Embedding(std::shared_ptr<const NumberField> field, Precision prec)
    : field_(std::move(field)), root_(upper_root(field_->polynomial(), prec)) {}

BigComplex Embedding::operator()(const NumberFieldElement& x) const {
  if (!x.field()) return BigComplex(prec());
  return x.embed(root_);
}

namespace {

bool is_rounding_noise(const BigReal& im, const BigComplex& v, Precision prec) {
  const double scale = std::max(0.0, abs(v).log2_abs());
  return im.is_zero() || im.log2_abs() < scale - static_cast<double>(prec) / 2;
}

void check_center_strip(const GammaPoint& p, bool real_variant) {
  const Precision wp = p.z.prec();
  BigReal s(0L, wp);
  for (const auto& t : p.taus) s += abs(t.im());
  if (real_variant) {
    BigComplex w = p.z * 2L;
    for (const auto& t : p.taus) w -= t;
    if (!(abs(w.im()) < s)) {
      throw Error(Errc::CenterStripViolation, "term: |Im(2z - sum tau)| >= sum |Im tau|");
    }
    return;
  }
  // After reorientation the first argument must lie in the closed center strip.
  BigReal y = p.z.im();
  for (const auto& t : p.taus) {
    if (t.im().sign() < 0) y -= t.im();
  }
  const double tol = s.log2_abs() - static_cast<double>(wp) / 2;
  const bool below = y.sign() < 0 && y.log2_abs() > tol;
  const BigReal over = y - s;
  const bool above = over.sign() > 0 && over.log2_abs() > tol;
  if (below || above) {
    throw Error(Errc::CenterStripViolation, "term: reoriented argument outside the center strip");
  }
}

}  // namespace

GammaPoint term_point(const UnitTermSpec& t, const Embedding& emb) {
  if (t.level <= 0) throw Error(Errc::InvalidArgument, "term: level must be positive");
  const Precision ep = emb.prec();
  const BigReal level(t.level, ep);
  GammaPoint p{BigComplex(t.arg_rational, ep) + emb(t.arg_delta) / level, {}};
  for (const auto& tau : t.taus) {
    BigComplex v = emb(tau) / level;
    if (t.real_variant && is_rounding_noise(v.im(), v, ep)) v.im() = BigReal(0L, ep);
    p.taus.push_back(std::move(v));
  }
  return p;
}

BigComplex eval_term(const UnitTermSpec& t, const Embedding& emb, Precision prec, const GammaOptions& opts) {
  if (t.nu != 1 && t.nu != -1) throw Error(Errc::InvalidArgument, "term: nu must be +1 or -1");
  if (t.smoothing_N < 2) throw Error(Errc::InvalidArgument, "term: smoothing index must be at least 2");
  if (gcd(mpz_class(t.smoothing_N), mpz_class(t.arg_rational.get_den())) != 1) {
    throw Error(Errc::InvalidArgument, "term: smoothing index shares a factor with the argument denominator");
  }
  if (t.taus.empty()) throw Error(Errc::InvalidArgument, "term: no parameters");
  const GammaPoint p = term_point(t, emb);
  check_center_strip(p, t.real_variant);

  const Precision wp = prec + static_cast<Precision>(std::ceil(std::log2(static_cast<double>(t.smoothing_N)))) + 8;
  GammaPoint scaled{p.z * t.smoothing_N, {}};
  for (const auto& tau : p.taus) scaled.taus.push_back(tau * t.smoothing_N);

  BigComplex a(wp), b(wp);
  if (t.real_variant) {
    a = gr_real_variant(p.z, p.taus, wp, opts);
    b = gr_real_variant(scaled.z, scaled.taus, wp, opts);
  } else {
    a = gr(p, wp, opts);
    b = gr(scaled, wp, opts);
  }
  BigComplex v = pow(a, t.smoothing_N) / b;
  if (t.nu < 0) v = inverse(v);
  return v.with_prec(prec);
}

unsigned thread_cap() {
  if (const char* env = std::getenv("ELLIPGAMMA_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    return 1;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

UnitValue eval_unit(const UnitSpec& u, const Embedding& emb, Precision prec, const GammaOptions& opts) {
  const std::size_t m = u.terms.size();
  if (m == 0) throw Error(Errc::InvalidArgument, "unit: no terms");
  std::vector<BigComplex> values(m, BigComplex(prec));
  std::vector<double> seconds(m, 0.0);
  std::vector<std::exception_ptr> errors(m);

  auto run = [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      values[i] = eval_term(u.terms[i], emb, prec, opts);
    } catch (...) {
      errors[i] = std::current_exception();
    }
    seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const std::size_t workers = std::min<std::size_t>(thread_cap(), m);
  if (workers <= 1) {
    for (std::size_t i = 0; i < m; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < m; i = next++) run(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  BigComplex prod(1L, prec);
  for (const auto& v : values) prod *= v;
  return {std::move(prod), std::move(values), std::move(seconds)};
}

BigReal log_abs_sq(const BigComplex& u) {
  if (u.is_zero()) throw Error(Errc::ZeroValue, "log_abs_sq: zero value");
  return log(norm(u));
}

SignSearchResult sign_search(std::span<const BigComplex> positive_term_values, const BigReal& reference,
                             double tolerance) {
  const std::size_t m = positive_term_values.size();
  if (m == 0 || m > 24) throw Error(Errc::InvalidArgument, "sign_search: between 1 and 24 terms required");
  std::vector<BigReal> logs;
  for (const auto& v : positive_term_values) logs.push_back(log_abs_sq(v));
  const Precision p = logs.front().prec();

  std::vector<SignSearchResult> matches;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    BigReal s(0L, p);
    std::vector<int> signs(m);
    for (std::size_t i = 0; i < m; ++i) {
      signs[i] = (mask >> i) & 1u ? -1 : 1;
      if (signs[i] > 0) {
        s += logs[i];
      } else {
        s -= logs[i];
      }
    }
    if (abs(s - reference).to_double() < tolerance) matches.push_back({std::move(signs), std::move(s)});
  }
  auto show = [](const std::vector<int>& signs) {
    std::string out = "(";
    for (std::size_t i = 0; i < signs.size(); ++i) out += (i ? "," : "") + std::string(signs[i] > 0 ? "+" : "-");
    return out + ")";
  };
  if (matches.empty()) throw Error(Errc::NoMatch, "sign_search: no sign vector matches the reference");
  if (matches.size() > 1) {
    std::string list;
    for (const auto& mt : matches) list += " " + show(mt.signs);
    throw Error(Errc::Ambiguous, "sign_search: several sign vectors match:" + list);
  }
  return std::move(matches.front());
}

SignSearchResult sign_search(const UnitSpec& u, const Embedding& emb, const BigReal& reference, Precision prec,
                             double tolerance, const GammaOptions& opts) {
  UnitSpec positive = u;
  for (auto& t : positive.terms) t.nu = 1;
  const UnitValue v = eval_unit(positive, emb, prec, opts);
  return sign_search(v.term_values, reference, tolerance);
}

}  // namespace ellipgamma
