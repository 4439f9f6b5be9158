#include "ellipgamma/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <climits>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <string>

namespace ellipgamma {

namespace {

constexpr double kLn2 = 0.69314718055994531;
constexpr double kTwoPi = 6.28318530717958648;

// Fixed-precision complex scratch value for the inner series loops, which
// would otherwise allocate on every arithmetic operation.
struct Cx {
  mpfr_t re;
  mpfr_t im;

  explicit Cx(Precision p) {
    mpfr_init2(re, p);
    mpfr_init2(im, p);
    mpfr_set_zero(re, 1);
    mpfr_set_zero(im, 1);
  }
  Cx(const BigComplex& z, Precision p) : Cx(p) {
    mpfr_set(re, z.re().get(), MPFR_RNDN);
    mpfr_set(im, z.im().get(), MPFR_RNDN);
  }
  Cx(const Cx&) = delete;
  Cx& operator=(const Cx&) = delete;
  ~Cx() {
    mpfr_clear(re);
    mpfr_clear(im);
  }

  void swap(Cx& o) {
    mpfr_swap(re, o.re);
    mpfr_swap(im, o.im);
  }
  BigComplex big() const {
    BigComplex out(mpfr_get_prec(re));
    mpfr_set(out.re().get(), re, MPFR_RNDN);
    mpfr_set(out.im().get(), im, MPFR_RNDN);
    return out;
  }
};

// out = a * b; out must not alias a or b.
void cmul(Cx& out, const Cx& a, const Cx& b) {
  mpfr_fmms(out.re, a.re, b.re, a.im, b.im, MPFR_RNDN);
  mpfr_fmma(out.im, a.re, b.im, a.im, b.re, MPFR_RNDN);
}

void cmul_inplace(Cx& a, const Cx& b, Cx& tmp) {
  cmul(tmp, a, b);
  a.swap(tmp);
}

// out = a / b; out must not alias a or b.
void cdiv(Cx& out, const Cx& a, const Cx& b, mpfr_t scratch) {
  mpfr_fmma(scratch, b.re, b.re, b.im, b.im, MPFR_RNDN);
  mpfr_fmma(out.re, a.re, b.re, a.im, b.im, MPFR_RNDN);
  mpfr_fmms(out.im, a.im, b.re, a.re, b.im, MPFR_RNDN);
  mpfr_div(out.re, out.re, scratch, MPFR_RNDN);
  mpfr_div(out.im, out.im, scratch, MPFR_RNDN);
}

void cadd_inplace(Cx& a, const Cx& b) {
  mpfr_add(a.re, a.re, b.re, MPFR_RNDN);
  mpfr_add(a.im, a.im, b.im, MPFR_RNDN);
}

// out = 1 - a
void one_minus(Cx& out, const Cx& a) {
  mpfr_ui_sub(out.re, 1, a.re, MPFR_RNDN);
  mpfr_neg(out.im, a.im, MPFR_RNDN);
}

double log2_abs_part(mpfr_srcptr v) {
  if (mpfr_zero_p(v)) return -INFINITY;
  long e = 0;
  const double d = mpfr_get_d_2exp(&e, v, MPFR_RNDN);
  return static_cast<double>(e) + std::log2(std::fabs(d));
}

double log2_abs(const Cx& a) {
  const double lr = log2_abs_part(a.re), li = log2_abs_part(a.im);
  const double hi = std::max(lr, li), lo = std::min(lr, li);
  if (hi == -INFINITY) return hi;
  return hi + 0.5 * std::log2(1.0 + std::exp2(2.0 * (lo - hi)));
}

// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// log(1 - exp(-x)) for x > 0.
double log1m_exp_neg(double x) { return x > 0.69 ? std::log1p(-std::exp(-x)) : std::log(-std::expm1(-x)); }

Precision with_guard(Precision prec, double extra_bits) {
  const double e = std::ceil(std::max(0.0, extra_bits));
  return guard_precision(prec) + static_cast<Precision>(e);
}

BigComplex round_to(const BigComplex& v, Precision prec) { return v.with_prec(std::max(prec, kMinPrecision)); }

BigComplex theta_at(const BigComplex& z, const BigComplex& tau, Precision wp, double* lost_bits, long n_lo,
                    long n_hi, long prod_terms) {
  // Numerator: sum_{n_lo <= n <= n_hi} (-1)^n x^n q^{n(n-1)/2}, by the recurrence
  // t_{n+1} = t_n * c_n with c_n = -x q^n and c_{n+1} = c_n q.
  const BigComplex zw = z.with_prec(wp), tw = tau.with_prec(wp);
  const mpz_class tri = mpz_class(n_lo) * (n_lo - 1) / 2;
  BigComplex start = e2pi(zw * n_lo + tw * BigComplex(mpq_class(tri), wp));
  if (n_lo % 2 != 0) start = -start;
  Cx t(start, wp), c(-e2pi(zw + tw * n_lo), wp), q(e2pi(tw), wp), tmp(wp), sum(wp);
  double max_log = -INFINITY;
  for (long n = n_lo; n <= n_hi; ++n) {
    cadd_inplace(sum, t);
    max_log = std::max(max_log, log2_abs(t));
    cmul_inplace(t, c, tmp);
    cmul_inplace(c, q, tmp);
  }
  // Denominator: prod_{n >= 1} (1 - q^n).
  Cx qn(e2pi(tw), wp), prod(wp), factor(wp);
  mpfr_set_ui(prod.re, 1, MPFR_RNDN);
  for (long n = 1; n <= prod_terms; ++n) {
    one_minus(factor, qn);
    cmul_inplace(prod, factor, tmp);
    cmul_inplace(qn, q, tmp);
  }
  mpfr_t scratch;
  mpfr_init2(scratch, wp);
  Cx out(wp);
  cdiv(out, sum, prod, scratch);
  mpfr_clear(scratch);
  *lost_bits = max_log - log2_abs(sum);
  return out.big();
}

}  // namespace

BigComplex theta(const BigComplex& z, const BigComplex& tau, Precision prec, const GammaOptions& opts) {
  if (tau.im().sign() == 0) throw Error(Errc::RealParameter, "theta: tau is real");
  if (tau.im().sign() < 0) throw Error(Errc::InvalidArgument, "theta: Im tau must be positive");
  if (!z.is_finite() || !tau.is_finite()) throw Error(Errc::InvalidArgument, "theta: non-finite argument");
  const double b = kTwoPi * tau.im().to_double();
  if (b < opts.min_decay) throw Error(Errc::ConvergenceTooSlow, "theta: Im tau too small");
  const double a = kTwoPi * z.im().to_double();

  Precision wp = with_guard(prec, 24);
  for (int attempt = 0; attempt < 4; ++attempt) {
    // Terms have log-magnitude -a n - b n(n-1)/2, a parabola peaking at n*.
    const double nstar = 0.5 - a / b;
    const double depth = static_cast<double>(wp) * kLn2 + 40.0;
    const double width = std::sqrt(2.0 * depth / b) + 2.0;
    const long n_lo = static_cast<long>(std::floor(nstar - width));
    const long n_hi = static_cast<long>(std::ceil(nstar + width));
    const long prod_terms = static_cast<long>(std::ceil(depth / b)) + 2;
    const double extra = std::log2(static_cast<double>(n_hi - n_lo + prod_terms)) - log1m_exp_neg(b) / kLn2;
    const Precision wp_eff = wp + static_cast<Precision>(std::ceil(extra));
    double lost = 0.0;
    BigComplex v = theta_at(z, tau, wp_eff, &lost, n_lo, n_hi, prod_terms);
    if (lost <= static_cast<double>(wp - prec) - 16.0 || attempt == 3) return round_to(v, prec);
    wp = with_guard(prec, 24 + lost);
  }
  throw Error(Errc::ConvergenceTooSlow, "theta: cancellation could not be resolved");
}

BigComplex gr_center(const GammaPoint& p, Precision prec, const GammaOptions& opts) {
  const int r = p.r();
  if (r < 0) throw Error(Errc::InvalidArgument, "gr_center: at least one parameter required");
  BigReal s(0L, std::max(prec, p.z.prec()));
  for (const auto& t : p.taus) {
    if (t.im().sign() <= 0) throw Error(Errc::OutsideCenterStrip, "gr_center: parameters must lie in the upper half-plane");
    s += t.im();
  }
  if (p.z.im().sign() <= 0 || p.z.im() >= s) {
    throw Error(Errc::OutsideCenterStrip, "gr_center: need 0 < Im z < sum Im tau");
  }
  const double a = kTwoPi * p.z.im().to_double();
  const double b = kTwoPi * (s - p.z.im()).to_double();
  const double y = std::min(a, b);
  if (!(y >= opts.min_decay)) throw Error(Errc::ConvergenceTooSlow, "gr_center: too close to the strip boundary");
  std::vector<double> dq;
  for (const auto& t : p.taus) dq.push_back(kTwoPi * t.im().to_double());

  // Certified truncation: term j is bounded by
  //   M_j = (e^{-aj} + e^{-bj}) / (j prod (1 - |q_k|^j)),
  // and M_{j+1} <= e^{-y} M_j, so the tail from J on is at most M_J / (1 - e^{-y}).
  const double target = -(static_cast<double>(prec) + 24.0) * kLn2 + log1m_exp_neg(y);
  double log_sum = -INFINITY;
  long jmax = 0;
  for (long j = 1;; ++j) {
    const double dj = static_cast<double>(j);
    double lm = log_add(-a * dj, -b * dj) - std::log(dj);
    for (double d : dq) lm -= log1m_exp_neg(d * dj);
    if (lm < target) {
      jmax = j;
      break;
    }
    log_sum = log_add(log_sum, lm);
    if (j > 2'000'000'000L) throw Error(Errc::ConvergenceTooSlow, "gr_center: series too long");
  }
  double extra = 24.0 + std::max(0.0, log_sum / kLn2) + std::log2(static_cast<double>(jmax) + 1.0);
  for (double d : dq) extra -= log1m_exp_neg(d) / kLn2;
  const Precision wp = with_guard(prec, extra);

  const BigComplex zw = p.z.with_prec(wp);
  const BigComplex x = e2pi(zw);
  BigComplex qprod(1L, wp);
  std::vector<BigComplex> qs;
  for (const auto& t : p.taus) {
    qs.push_back(e2pi(t.with_prec(wp)));
    qprod *= qs.back();
  }
  // A = Q / x has modulus e^{-b}, B = x has modulus e^{-a}.
  const Cx A(qprod * e2pi(-zw), wp);
  const Cx B(x, wp);
  Cx apow(wp), bpow(wp), num(wp), den(wp), factor(wp), term(wp), sum(wp), tmp(wp);
  mpfr_set(apow.re, A.re, MPFR_RNDN);
  mpfr_set(apow.im, A.im, MPFR_RNDN);
  mpfr_set(bpow.re, B.re, MPFR_RNDN);
  mpfr_set(bpow.im, B.im, MPFR_RNDN);
  std::vector<std::unique_ptr<Cx>> qk, qpow;
  for (const auto& q : qs) {
    qk.push_back(std::make_unique<Cx>(q, wp));
    qpow.push_back(std::make_unique<Cx>(q, wp));
  }
  mpfr_t scratch;
  mpfr_init2(scratch, wp);
  for (long j = 1; j < jmax; ++j) {
    if (r % 2 == 0) {
      mpfr_add(num.re, apow.re, bpow.re, MPFR_RNDN);
      mpfr_add(num.im, apow.im, bpow.im, MPFR_RNDN);
    } else {
      mpfr_sub(num.re, apow.re, bpow.re, MPFR_RNDN);
      mpfr_sub(num.im, apow.im, bpow.im, MPFR_RNDN);
    }
    one_minus(den, *qpow[0]);
    for (std::size_t k = 1; k < qpow.size(); ++k) {
      one_minus(factor, *qpow[k]);
      cmul_inplace(den, factor, tmp);
    }
    cdiv(term, num, den, scratch);
    mpfr_div_ui(term.re, term.re, static_cast<unsigned long>(j), MPFR_RNDN);
    mpfr_div_ui(term.im, term.im, static_cast<unsigned long>(j), MPFR_RNDN);
    cadd_inplace(sum, term);
    cmul_inplace(apow, A, tmp);
    cmul_inplace(bpow, B, tmp);
    for (std::size_t k = 0; k < qpow.size(); ++k) cmul_inplace(*qpow[k], *qk[k], tmp);
  }
  mpfr_clear(scratch);
  return round_to(exp(-sum.big()), prec);
}

namespace {

std::string hex_key(const BigReal& v) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%Ra", v.get());
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

// One gr() evaluation: owns the memo table and the translation counter.
class GrEvaluator {
 public:
  GrEvaluator(Precision prec, const GammaOptions& opts) : prec_(prec), opts_(opts) {}

  BigComplex eval(const BigComplex& z, const std::vector<BigComplex>& taus) {
    std::string key = std::to_string(taus.size()) + '|' + hex_key(z.re()) + ',' + hex_key(z.im());
    for (const auto& t : taus) key += '|' + hex_key(t.re()) + ',' + hex_key(t.im());
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    BigComplex v = compute(z, taus);
    cache_.emplace(std::move(key), v);
    return v;
  }

 private:
  BigComplex compute(const BigComplex& z, const std::vector<BigComplex>& taus) {
    std::vector<BigComplex> flipped = taus;
    BigComplex zr = z;
    int flips = 0;
    for (auto& t : flipped) {
      if (t.im().sign() == 0) throw Error(Errc::RealParameter, "gr: parameter with zero imaginary part");
      if (t.im().sign() < 0) {
        // Inversion: G_r(z, .., tau, ..) = 1 / G_r(z - tau, .., -tau, ..)
        zr -= t;
        t = -t;
        ++flips;
      }
    }
    if (flips > 0) {
      BigComplex v = eval(zr, flipped);
      return flips % 2 == 0 ? v : inverse(v);
    }
    if (taus.size() == 1) return theta(z, taus[0], prec_, opts_);

    BigReal s(0L, z.prec());
    for (const auto& t : taus) s += t.im();
    std::size_t k = 0;
    for (std::size_t i = 1; i < taus.size(); ++i) {
      const bool better = opts_.largest_first ? taus[i].im() > taus[k].im() : taus[i].im() < taus[k].im();
      if (better) k = i;
    }
    std::vector<BigComplex> rest;
    for (std::size_t i = 0; i < taus.size(); ++i)
      if (i != k) rest.push_back(taus[i]);

    const BigReal& y = z.im();
    const BigReal& tk = taus[k].im();
    auto margin = [&](const BigReal& im) {
      const BigReal lo = im, hi = s - im;
      return lo < hi ? lo : hi;
    };
    int dir = 0;
    if (y.sign() <= 0) {
      dir = +1;
    } else if (y >= s) {
      dir = -1;
    } else {
      // Inside the strip but possibly so close to its edge that the series
      // converges slowly; shift when that at least quadruples the margin.
      const BigReal m0 = margin(y);
      const BigReal mu = margin(y + tk), md = margin(y - tk);
      const BigReal m0x4 = m0 * 4L;
      if (mu > m0x4 && mu >= md) {
        dir = +1;
      } else if (md > m0x4) {
        dir = -1;
      }
    }
    if (dir == 0) return gr_center(GammaPoint{z, taus}, prec_, opts_);
    if (++translations_ > opts_.max_translations) {
      throw Error(Errc::DepthExceeded, "gr: translation budget exhausted");
    }
    if (dir > 0) {
      // G_r(z) = G_r(z + tau_k) / G_{r-1}(z; tau without tau_k)
      return eval(z + taus[k], taus) / eval(z, rest);
    }
    // G_r(z) = G_r(z - tau_k) * G_{r-1}(z - tau_k; tau without tau_k)
    const BigComplex zd = z - taus[k];
    return eval(zd, taus) * eval(zd, rest);
  }

  Precision prec_;
  GammaOptions opts_;
  std::map<std::string, BigComplex> cache_;
  std::uint64_t translations_ = 0;
};

}  // namespace

BigComplex gr(const GammaPoint& p, Precision prec, const GammaOptions& opts) {
  if (p.taus.empty()) throw Error(Errc::InvalidArgument, "gr: at least one parameter required");
  const Precision wp = with_guard(prec, 16);
  GrEvaluator ev(wp, opts);
  std::vector<BigComplex> taus;
  for (const auto& t : p.taus) taus.push_back(t.with_prec(std::max(wp, t.prec())));
  return round_to(ev.eval(p.z.with_prec(std::max(wp, p.z.prec())), taus), prec);
}

BigComplex gr_product(const GammaPoint& p, Precision prec, double max_factors) {
  if (p.taus.empty()) throw Error(Errc::InvalidArgument, "gr_product: at least one parameter required");
  const Precision wp = with_guard(prec, 16 + 2 * std::log2(max_factors));
  BigComplex z = p.z.with_prec(wp);
  std::vector<BigComplex> taus;
  bool invert = false;
  for (const auto& t : p.taus) {
    if (t.im().sign() == 0) throw Error(Errc::RealParameter, "gr_product: parameter with zero imaginary part");
    BigComplex tw = t.with_prec(wp);
    if (tw.im().sign() < 0) {
      z -= tw;
      tw = -tw;
      invert = !invert;
    }
    taus.push_back(std::move(tw));
  }
  const std::size_t n = taus.size();
  const bool odd = n % 2 == 0;  // r = n - 1
  BigComplex sum(wp);
  std::vector<double> im;
  for (const auto& t : taus) {
    sum += t;
    im.push_back(t.im().to_double());
  }
  const double zi = z.im().to_double(), si = sum.im().to_double();
  const double cutoff = (static_cast<double>(prec) + 20.0) * std::log(2.0) / (2.0 * M_PI);
  double volume = 1.0;
  for (std::size_t k = 0; k < n; ++k) volume *= (cutoff + std::fabs(zi) + si) / im[k] / static_cast<double>(k + 1);
  if (volume > max_factors) throw Error(Errc::ConvergenceTooSlow, "gr_product: too many factors");

  const BigComplex one(1L, wp);
  BigComplex num(1L, wp), den(1L, wp);
  std::vector<BigComplex> partial(n + 1, BigComplex(wp));
  // Depth-first walk over multi-indices m with sum m_k Im tau_k below the cutoff.
  std::function<void(std::size_t, double)> walk = [&](std::size_t k, double acc) {
    if (k == n) {
      const BigComplex& w = partial[n];
      num *= one - e2pi(w + sum - z);
      BigComplex f = one - e2pi(w + z);
      if (odd) {
        den *= f;
      } else {
        num *= f;
      }
      return;
    }
    partial[k + 1] = partial[k];
    for (long mk = 0;; ++mk) {
      const double a = acc + static_cast<double>(mk) * im[k];
      if (mk > 0 && std::min(a + si - zi, a + zi) > cutoff) break;
      walk(k + 1, a);
      partial[k + 1] += taus[k];
    }
  };
  walk(0, 0.0);
  BigComplex v = num / den;
  if (invert) v = inverse(v);
  return round_to(v, prec);
}

BigComplex gr_real_variant(const BigComplex& z, std::span<const BigComplex> taus, Precision prec,
                           const GammaOptions& opts) {
  if (taus.size() != 3) throw Error(Errc::InvalidArgument, "real variant needs exactly three parameters");
  int pos = -1, zero = -1, neg = -1;
  for (int i = 0; i < 3; ++i) {
    const int sg = taus[static_cast<std::size_t>(i)].im().sign();
    int& slot = sg > 0 ? pos : (sg < 0 ? neg : zero);
    if (slot >= 0) throw Error(Errc::InvalidArgument, "real variant needs Im tau of signs (+, 0, -)");
    slot = i;
  }
  const auto& tp = taus[static_cast<std::size_t>(pos)];
  const auto& t0 = taus[static_cast<std::size_t>(zero)];
  const auto& tn = taus[static_cast<std::size_t>(neg)];

  const Precision in_prec = std::max({z.prec(), tp.prec(), t0.prec(), tn.prec()});
  const BigComplex w = z * 2L - tp - t0 - tn;
  const double sum_im = tp.im().to_double() - tn.im().to_double();
  const double yprime = M_PI * (sum_im - std::fabs(w.im().to_double()));
  if (!(yprime > 0)) throw Error(Errc::OutsideCenterStrip, "real variant needs Im tau_- < Im z < Im tau_+");
  if (yprime < opts.min_decay) throw Error(Errc::ConvergenceTooSlow, "real variant: z too close to the boundary");

  // Term j is at most 4 e^{-y' j} / (j |sin(pi j tau_real)| prod (1 - e^{-2 pi j |Im tau|})).
  // The small denominators are only O(j^2) for quadratic irrationals, so the
  // cutoff uses the worst constant K = max 1/(i^2 |sin|) observed so far.
  const double t0d = t0.re().to_double();
  const double ap = kTwoPi * tp.im().to_double(), an = -kTwoPi * tn.im().to_double();
  const double target = -(static_cast<double>(prec) + 24.0) * kLn2 + log1m_exp_neg(yprime);
  double log_sum = -INFINITY, log_k = -INFINITY;
  long jmax = 0;
  for (long j = 1;; ++j) {
    const double dj = static_cast<double>(j);
    const double sd = std::fabs(std::sin(M_PI * std::fmod(dj * t0d, 2.0)));
    const double common = std::log(4.0) - yprime * dj - std::log(dj) - log1m_exp_neg(ap * dj) - log1m_exp_neg(an * dj);
    const double ls = sd > 0 ? -std::log(sd) : 800.0;
    log_k = std::max(log_k, ls - 2.0 * std::log(dj));
    log_sum = log_add(log_sum, common + ls);
    if (common + log_k + 2.0 * std::log(dj) < target && j > 8) {
      jmax = j;
      break;
    }
    if (j > 500'000'000L) throw Error(Errc::ConvergenceTooSlow, "real variant: series too long");
  }
  const Precision wp = with_guard(prec, 24.0 + std::max(0.0, log_sum / kLn2) + std::log2(static_cast<double>(jmax)));
  const Precision lp = std::max(wp, in_prec);
  const Precision tp_bits = wp + static_cast<Precision>(std::ceil(std::log2(static_cast<double>(jmax) + 2.0)));

  // e^{i pi v} = e2pi(v / 2)
  const Cx E(e2pi(w.with_prec(lp) / 2L), wp);
  const Cx Einv(e2pi(-w.with_prec(lp) / 2L), wp);
  const Cx P(e2pi(tp.with_prec(lp) / 2L), wp), Pinv(e2pi(-tp.with_prec(lp) / 2L), wp);
  const Cx N(e2pi(tn.with_prec(lp) / 2L), wp), Ninv(e2pi(-tn.with_prec(lp) / 2L), wp);
  Cx ej(wp), ejinv(wp), pj(wp), pjinv(wp), nj(wp), njinv(wp), tmp(wp), cosj(wp), sp(wp), sn(wp), den(wp), term(wp),
      sum(wp);
  auto copy = [](Cx& dst, const Cx& src) {
    mpfr_set(dst.re, src.re, MPFR_RNDN);
    mpfr_set(dst.im, src.im, MPFR_RNDN);
  };
  copy(ej, E);
  copy(ejinv, Einv);
  copy(pj, P);
  copy(pjinv, Pinv);
  copy(nj, N);
  copy(njinv, Ninv);

  mpfr_t scratch, t, s1, pi_c, threshold;
  mpfr_inits2(tp_bits, t, s1, pi_c, static_cast<mpfr_ptr>(nullptr));
  mpfr_init2(scratch, wp);
  mpfr_init2(threshold, 64);
  mpfr_const_pi(pi_c, MPFR_RNDN);
  mpfr_set_ui_2exp(threshold, 1, -static_cast<mpfr_exp_t>(prec / 2), MPFR_RNDN);
  BigReal tau_real = t0.re().with_prec(std::max(tp_bits, t0.prec()));

  // sin(pi j v) = (e^{i pi j v} - e^{-i pi j v}) / (2i)
  auto sine = [](Cx& out, const Cx& a, const Cx& ainv) {
    mpfr_sub(out.im, a.re, ainv.re, MPFR_RNDN);
    mpfr_sub(out.re, a.im, ainv.im, MPFR_RNDN);
    mpfr_div_2ui(out.re, out.re, 1, MPFR_RNDN);
    mpfr_div_2ui(out.im, out.im, 1, MPFR_RNDN);
    mpfr_neg(out.im, out.im, MPFR_RNDN);
  };

  bool small = false;
  for (long j = 1; j < jmax; ++j) {
    mpfr_add(cosj.re, ej.re, ejinv.re, MPFR_RNDN);
    mpfr_add(cosj.im, ej.im, ejinv.im, MPFR_RNDN);
    mpfr_div_2ui(cosj.re, cosj.re, 1, MPFR_RNDN);
    mpfr_div_2ui(cosj.im, cosj.im, 1, MPFR_RNDN);
    sine(sp, pj, pjinv);
    sine(sn, nj, njinv);
    // sin(pi j tau_real) from j tau_real reduced modulo 2.
    mpfr_mul_ui(t, tau_real.get(), static_cast<unsigned long>(j), MPFR_RNDN);
    mpfr_div_2ui(s1, t, 1, MPFR_RNDN);
    mpfr_rint(s1, s1, MPFR_RNDN);
    mpfr_mul_2ui(s1, s1, 1, MPFR_RNDN);
    mpfr_sub(t, t, s1, MPFR_RNDN);
    mpfr_mul(t, t, pi_c, MPFR_RNDN);
    mpfr_sin(s1, t, MPFR_RNDN);
    if (mpfr_cmpabs(s1, threshold) < 0) {
      small = true;
      break;
    }
    cmul(den, sp, sn);
    mpfr_mul(den.re, den.re, s1, MPFR_RNDN);
    mpfr_mul(den.im, den.im, s1, MPFR_RNDN);
    mpfr_mul_ui(den.re, den.re, static_cast<unsigned long>(j), MPFR_RNDN);
    mpfr_mul_ui(den.im, den.im, static_cast<unsigned long>(j), MPFR_RNDN);
    cdiv(term, cosj, den, scratch);
    cadd_inplace(sum, term);
    cmul_inplace(ej, E, tmp);
    cmul_inplace(ejinv, Einv, tmp);
    cmul_inplace(pj, P, tmp);
    cmul_inplace(pjinv, Pinv, tmp);
    cmul_inplace(nj, N, tmp);
    cmul_inplace(njinv, Ninv, tmp);
  }
  mpfr_clears(t, s1, pi_c, scratch, threshold, static_cast<mpfr_ptr>(nullptr));
  if (small) throw Error(Errc::SmallDenominator, "real variant: sin(pi j tau) below 2^(-prec/2); raise precision");

  // log G_2 = (i/4) * sum
  BigComplex s = sum.big();
  BigComplex logg(-s.im() / 4L, s.re() / 4L);
  return round_to(exp(logg), prec);
}

namespace {

std::vector<mpq_class> bernoulli_numbers(int n) {
  std::vector<mpq_class> b(static_cast<std::size_t>(n) + 1);
  b[0] = 1;
  for (int m = 1; m <= n; ++m) {
    mpq_class acc = 0;
    mpz_class binom = 1;  // C(m+1, k)
    for (int k = 0; k < m; ++k) {
      acc += binom * b[static_cast<std::size_t>(k)];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    b[static_cast<std::size_t>(m)] = -acc / (m + 1);
    b[static_cast<std::size_t>(m)].canonicalize();
  }
  return b;
}

// n! [t^n] e^{zt} prod_j (omega_j t / (e^{omega_j t} - 1)) / prod omega_j, generic in the scalar type.
template <class T, class FromQ>
T bernoulli_generic(int n, const T& z, std::span<const T> omegas, FromQ from_q) {
  if (n < 0 || omegas.size() != static_cast<std::size_t>(n)) {
    throw Error(Errc::DimensionMismatch, "bernoulli_nn needs exactly n parameters");
  }
  const auto bn = bernoulli_numbers(n);
  const auto deg = static_cast<std::size_t>(n);
  std::vector<mpq_class> inv_fact(deg + 1);
  mpz_class f = 1;
  for (std::size_t k = 0; k <= deg; ++k) {
    if (k > 0) f *= static_cast<unsigned long>(k);
    inv_fact[k] = mpq_class(1, 1) / mpq_class(f);
  }
  // e^{zt} truncated at degree n.
  std::vector<T> series;
  T zp = from_q(mpq_class(1));
  for (std::size_t k = 0; k <= deg; ++k) {
    series.push_back(zp * from_q(inv_fact[k]));
    zp = zp * z;
  }
  T prod_omega = from_q(mpq_class(1));
  for (const T& w : omegas) {
    prod_omega = prod_omega * w;
    std::vector<T> factor;
    T wp = from_q(mpq_class(1));
    for (std::size_t k = 0; k <= deg; ++k) {
      factor.push_back(wp * from_q(bn[k] * inv_fact[k]));
      wp = wp * w;
    }
    std::vector<T> next(deg + 1, from_q(mpq_class(0)));
    for (std::size_t i = 0; i <= deg; ++i)
      for (std::size_t k = 0; i + k <= deg; ++k) next[i + k] = next[i + k] + series[i] * factor[k];
    series = std::move(next);
  }
  return series[deg] * from_q(mpq_class(f)) / prod_omega;
}

}  // namespace

mpq_class bernoulli_nn(int n, const mpq_class& z, std::span<const mpq_class> omegas) {
  for (const auto& w : omegas)
    if (w == 0) throw Error(Errc::ZeroOmega, "bernoulli_nn: omega is zero");
  mpq_class v = bernoulli_generic<mpq_class>(n, z, omegas, [](const mpq_class& q) { return q; });
  v.canonicalize();
  return v;
}

BigComplex bernoulli_nn(int n, const BigComplex& z, std::span<const BigComplex> omegas) {
  for (const auto& w : omegas)
    if (w.is_zero()) throw Error(Errc::ZeroOmega, "bernoulli_nn: omega is zero");
  Precision p = z.prec();
  for (const auto& w : omegas) p = std::min(p, w.prec());
  const Precision wp = guard_precision(p);
  std::vector<BigComplex> om;
  for (const auto& w : omegas) om.push_back(w.with_prec(wp));
  const BigComplex v = bernoulli_generic<BigComplex>(n, z.with_prec(wp), om,
                                                     [wp](const mpq_class& q) { return BigComplex(q, wp); });
  return v.with_prec(p);
}

BigReal modular_check(const BigComplex& z, std::span<const BigComplex> omegas, Precision prec,
                      const GammaOptions& opts) {
  const std::size_t n = omegas.size();
  if (n < 2) throw Error(Errc::InvalidArgument, "modular_check needs at least two periods");
  const Precision wp = with_guard(prec, 16);
  std::vector<BigComplex> om;
  for (const auto& w : omegas) {
    if (w.is_zero()) throw Error(Errc::ZeroOmega, "modular_check: omega is zero");
    om.push_back(w.with_prec(std::max(wp, w.prec())));
  }
  const BigComplex zw = z.with_prec(std::max(wp, z.prec()));
  BigComplex lhs(1L, wp);
  for (std::size_t j = 0; j < n; ++j) {
    GammaPoint p{zw / om[j], {}};
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      BigComplex ratio = om[k] / om[j];
      if (ratio.im().is_zero() || ratio.im().log2_abs() < abs(ratio).log2_abs() - static_cast<double>(prec) / 2) {
        throw Error(Errc::RealRatio, "modular_check: omega ratio is real");
      }
      p.taus.push_back(std::move(ratio));
    }
    lhs *= gr(p, wp, opts);
  }
  const BigComplex b = bernoulli_nn(static_cast<int>(n), zw, om);
  mpz_class fact = 1;
  for (std::size_t k = 2; k <= n; ++k) fact *= static_cast<unsigned long>(k);
  // exp(-2 pi i B / n!) = e2pi(-B / n!)
  const BigComplex rhs = e2pi(-b / BigComplex(mpq_class(fact), wp).re());
  return (abs(lhs - rhs) / abs(rhs)).with_prec(prec);
}

}  // namespace ellipgamma
