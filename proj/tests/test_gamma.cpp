#include <doctest.h>

#include <algorithm>
#include <array>
#include <random>

#include "ellipgamma/gamma.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ellipgamma;
using oracles::gr_product;
using oracles::random_complex;
using oracles::rel_log10;

namespace {

constexpr Precision kP = 140;  // about 40 digits

BigComplex poly_at(std::initializer_list<long> coeffs, const BigComplex& z) {
  BigComplex acc(z.prec());
  std::vector<long> c(coeffs);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc *= z;
    acc.re() += BigReal(*it, z.prec());
  }
  return acc;
}

}  // namespace

TEST_CASE("theta against its product and periodicity") {
  const BigComplex z = BigComplex::parse("0.3+0.2i", 2 * kP);
  const BigComplex tau = BigComplex::parse("0.1+0.5i", 2 * kP);
  CHECK(rel_log10(theta(z, tau, kP), gr_product(z, {tau}, 2 * kP)) < -38);
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    const BigComplex zz = random_complex(rng, -2, 2, -1, 1, kP);
    const BigComplex tt = random_complex(rng, -1, 1, 0.2, 1.5, kP);
    const BigComplex v = theta(zz, tt, kP);
    CHECK(rel_log10(theta(zz + BigComplex(1L, kP), tt, kP), v) < -38);
    CHECK(rel_log10(theta(zz, tt + BigComplex(1L, kP), kP), v) < -38);
    CHECK(rel_log10(v, gr_product(zz, {tt}, 2 * kP)) < -36);
  }
  CHECK_THROWS_AS(theta(z, BigComplex::parse("0.3", kP), kP), Error);
  CHECK_THROWS_AS(theta(z, BigComplex::parse("0.3+1e-9i", kP), kP), Error);
}

TEST_CASE("smoothed theta at an imaginary quadratic point is algebraic") {
  // tau = (10 + w) / 91 with w = e(1/3); the quotient is a root of x^4 + 3x^3 + 32x^2 + 13.
  const Precision p = 200;
  const BigComplex w = e2pi(BigComplex(mpq_class(1, 3), 2 * p));
  const BigComplex tau = (BigComplex(10L, 2 * p) + w) / 91L;
  const BigComplex u = pow(theta(BigComplex(mpq_class(1, 13), 2 * p), tau, p), 7) /
                       theta(BigComplex(mpq_class(7, 13), 2 * p), tau * 7L, p);
  const IntPolynomial poly{13, 0, 32, 3, 1};
  CHECK(abs(poly.eval(u)).log2_abs() - std::log2(32.0 * 16.0) < -170.0);
}

TEST_CASE("gr_center: theta, double and triple products") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    const BigComplex tau = random_complex(rng, -1, 1, 0.3, 1.0, kP);
    const BigComplex z = BigComplex(0.37, 0.0, kP) + BigComplex(BigReal(kP), tau.im() / 3L);
    CHECK(rel_log10(gr_center({z, {tau}}, kP), theta(z, tau, kP)) < -38);
  }
  const BigComplex z = BigComplex::parse("0.2+0.1i", 2 * kP);
  const std::vector<BigComplex> ts{BigComplex::parse("0.3i", 2 * kP), BigComplex::parse("0.5i", 2 * kP)};
  CHECK(rel_log10(gr_center({z, ts}, kP), gr_product(z, ts, 2 * kP)) < -38);
  for (int t = 0; t < 3; ++t) {
    std::vector<BigComplex> tr;
    BigReal s(0L, 2 * kP);
    for (int k = 0; k < 3; ++k) {
      tr.push_back(random_complex(rng, -1, 1, 0.25, 0.6, 2 * kP));
      s += tr.back().im();
    }
    const BigComplex zz = BigComplex(BigReal(0.4, 2 * kP), s * 2L / 5L);
    CHECK(rel_log10(gr_center({zz, tr}, kP), gr_product(zz, tr, 2 * kP)) < -36);
  }
  CHECK_THROWS_AS(gr_center({BigComplex::parse("0.2-0.1i", kP), ts}, kP), Error);
  CHECK_THROWS_AS(gr_center({BigComplex::parse("0.2+0.9i", kP), ts}, kP), Error);
}

TEST_CASE("gr: inversion, pseudo-periodicity and 1-periodicity") {
  std::mt19937_64 rng(31);
  for (int r = 0; r <= 2; ++r) {
    for (int t = 0; t < 4; ++t) {
      std::vector<BigComplex> ts;
      for (int k = 0; k <= r; ++k) ts.push_back(random_complex(rng, -1, 1, 0.3, 0.9, kP));
      const BigComplex z = random_complex(rng, -1, 1, -0.8, 1.5, kP);
      const BigComplex v = gr({z, ts}, kP);
      for (int k = 0; k <= r; ++k) {
        auto flipped = ts;
        flipped[static_cast<std::size_t>(k)] = -ts[static_cast<std::size_t>(k)];
        const BigComplex a = gr({z, flipped}, kP);
        const BigComplex b = gr({z + ts[static_cast<std::size_t>(k)], ts}, kP);
        CHECK(rel_log10(a * b, BigComplex(1L, kP)) < -36);
        auto shifted = ts;
        shifted[static_cast<std::size_t>(k)] += BigComplex(1L, kP);
        CHECK(rel_log10(gr({z, shifted}, kP), v) < -36);
        if (r >= 1) {
          std::vector<BigComplex> rest;
          for (int i = 0; i <= r; ++i)
            if (i != k) rest.push_back(ts[static_cast<std::size_t>(i)]);
          CHECK(rel_log10(b / v, gr({z, rest}, kP)) < -36);
        }
      }
      CHECK(rel_log10(gr({z + BigComplex(1L, kP), ts}, kP), v) < -36);
    }
  }
}

TEST_CASE("gr: path independence") {
  std::mt19937_64 rng(41);
  GammaOptions smallest;
  smallest.largest_first = false;
  for (int t = 0; t < 5; ++t) {
    std::vector<BigComplex> ts;
    for (int k = 0; k < 3; ++k) ts.push_back(random_complex(rng, -1, 1, 0.2, 0.8, kP) * (t % 2 == 0 ? 1L : -1L));
    const BigComplex z = random_complex(rng, -1, 1, -2.0, 2.0, kP);
    const BigComplex v = gr({z, ts}, kP);
    CHECK(rel_log10(gr({z, ts}, kP, smallest), v) < -36);
    std::reverse(ts.begin(), ts.end());
    CHECK(rel_log10(gr({z, ts}, kP), v) < -36);
  }
}

TEST_CASE("gr: translation budget and real parameters") {
  GammaOptions tight;
  tight.max_translations = 3;
  const std::vector<BigComplex> ts{BigComplex::parse("0.1+0.3i", kP), BigComplex::parse("0.2+0.4i", kP)};
  CHECK_THROWS_AS(gr({BigComplex::parse("0.1+20i", kP), ts}, kP, tight), Error);
  CHECK_THROWS_AS(gr({BigComplex::parse("0.1", kP), {BigComplex::parse("0.5", kP)}}, kP), Error);
}

TEST_CASE("gamma value for the cubic field of 10") {
  const Precision p = digits_to_bits(30), hp = 4 * p;
  const BigComplex z = upper_root(IntPolynomial{-10, 0, 0, 1}, hp);
  const BigComplex tau = poly_at({5230, -11, -5}, z) / 1485L, sig = poly_at({2335, 1, -2}, z) / 1485L;
  const BigComplex a(mpq_class(1, 5), hp);
  const BigComplex u = pow(gr({a, {tau, sig}}, p), 11) / gr({a * 11L, {tau * 11L, sig * 11L}}, p);
  CHECK(rel_log10(u, BigComplex::parse("-27.5333588-32.7146180i", p)) < -7.5);
}

TEST_CASE("real-parameter variant") {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 4; ++t) {
    const BigComplex tp = random_complex(rng, -1, 1, 0.3, 0.8, 2 * kP);
    const BigComplex tn = random_complex(rng, -1, 1, -0.8, -0.3, 2 * kP);
    // A real quadratic irrational as the real parameter.
    const BigComplex t0(sqrt(BigReal(std::array<long, 4>{2, 3, 5, 7}[static_cast<std::size_t>(t)], 2 * kP)) - BigReal(1L, 2 * kP), BigReal(2 * kP));
    const BigComplex z(BigReal(0.3, 2 * kP), (tp.im() + tn.im()) / 2L);
    const std::vector<BigComplex> ts{tp, t0, tn};
    const BigComplex v = gr_real_variant(z, ts, kP);
    const std::vector<BigComplex> perm{tn, tp, t0};
    CHECK(rel_log10(gr_real_variant(z, perm, kP), v) < -36);
    // Nudging the real parameter off the axis lets the general path apply.
    const BigComplex nudged = t0 + BigComplex(BigReal(2 * kP), BigReal::parse("1e-20", 2 * kP));
    CHECK(rel_log10(gr({z, {tp, nudged, tn}}, kP), v) < -10);
  }
  const std::vector<BigComplex> bad{BigComplex::parse("0.5i", kP), BigComplex::parse("0.3", kP),
                                    BigComplex::parse("0.4i", kP)};
  CHECK_THROWS_AS(gr_real_variant(BigComplex::parse("0.1", kP), bad, kP), Error);
  const std::vector<BigComplex> ok{BigComplex::parse("0.5i", kP), BigComplex::parse("0.3", kP),
                                   BigComplex::parse("-0.4i", kP)};
  CHECK_THROWS_AS(gr_real_variant(BigComplex::parse("0.1+0.7i", kP), ok, kP), Error);
  // A rational real parameter makes sin(pi j tau) vanish.
  CHECK_THROWS_AS(gr_real_variant(BigComplex::parse("0.1", kP), ok, kP), Error);
}

TEST_CASE("generalized Bernoulli polynomials") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<long> u(-30, 30);
  auto rq = [&]() {
    long d = 0;
    while (d == 0) d = u(rng);
    mpq_class q(u(rng), d);
    q.canonicalize();
    return q;
  };
  for (int t = 0; t < 20; ++t) {
    const mpq_class z = rq();
    mpq_class w = 0;
    while (w == 0) w = rq();
    const std::vector<mpq_class> om{w};
    mpq_class expect = z / w - mpq_class(1, 2);
    CHECK(bernoulli_nn(1, z, om) == expect);
  }
  for (int n = 2; n <= 5; ++n) {
    for (int t = 0; t < 5; ++t) {
      const mpq_class z = rq();
      std::vector<mpq_class> om;
      for (int k = 0; k < n; ++k) {
        mpq_class w = 0;
        while (w == 0) w = rq();
        om.push_back(w);
      }
      const mpq_class b = bernoulli_nn(n, z, om);
      mpq_class lambda = 0;
      while (lambda == 0) lambda = rq();
      std::vector<mpq_class> scaled;
      for (const auto& w : om) scaled.push_back(w * lambda);
      CHECK(bernoulli_nn(n, z * lambda, scaled) == b);
      std::vector<mpq_class> rev(om.rbegin(), om.rend());
      CHECK(bernoulli_nn(n, z, rev) == b);
      std::vector<BigComplex> omc;
      for (const auto& w : om) omc.emplace_back(w, kP);
      CHECK(rel_log10(bernoulli_nn(n, BigComplex(z, kP), omc), BigComplex(b, kP)) < -36);
    }
  }
  // B_{2,2}(z; 1, 1) = z^2 - 2z + 5/6 ... from the direct Laurent expansion of e^{zt}/(e^t - 1)^2.
  const std::vector<mpq_class> ones{1, 1};
  CHECK(bernoulli_nn(2, mpq_class(0), ones) == mpq_class(5, 6));
  CHECK(bernoulli_nn(2, mpq_class(1), ones) == mpq_class(-1, 6));
  const std::vector<mpq_class> zero{1, 0};
  CHECK_THROWS_AS(bernoulli_nn(2, mpq_class(1), zero), Error);
}

TEST_CASE("modular property") {
  const Precision p = digits_to_bits(40);
  const std::vector<BigComplex> om{BigComplex(1L, p), BigComplex::parse("0.3+0.7i", p),
                                   BigComplex::parse("-0.4+0.9i", p)};
  const BigComplex z = BigComplex::parse("0.2+0.1i", p);
  const BigReal res = modular_check(z, om, p);
  CHECK(res.log2_abs() * std::log10(2.0) < -25);
  const std::vector<BigComplex> perm{om[2], om[0], om[1]};
  CHECK(modular_check(z, perm, p).log2_abs() * std::log10(2.0) < -25);

  const std::vector<BigComplex> om4{BigComplex(1L, p), BigComplex::parse("0.2+0.8i", p),
                                    BigComplex::parse("-0.5+0.6i", p), BigComplex::parse("0.7+1.1i", p)};
  CHECK(modular_check(BigComplex::parse("0.15+0.05i", p), om4, p).log2_abs() * std::log10(2.0) < -25);

  const std::vector<BigComplex> real_ratio{BigComplex(1L, p), BigComplex(2L, p), BigComplex::parse("0.3+0.7i", p)};
  CHECK_THROWS_AS(modular_check(z, real_ratio, p), Error);
}

TEST_CASE("real-parameter product for the quartic field of 12") {
  const Precision p = digits_to_bits(30), hp = 4 * p;
  const BigComplex w = upper_root(IntPolynomial{-12, 0, 0, 0, 1}, hp);
  const std::vector<std::vector<std::vector<long>>> terms{
      {{-1354, 4, 3, 1}, {708, 0, -2}, {866, -2, -1}},
      {{-158, 2, -1}, {-708, 0, 2}, {1402, -4, 1, 1}}};
  BigComplex prod(1L, p);
  for (const auto& term : terms) {
    std::vector<BigComplex> ts, scaled;
    for (const auto& c : term) {
      BigComplex v(hp);
      for (auto it = c.rbegin(); it != c.rend(); ++it) {
        v *= w;
        v.re() += BigReal(*it, hp);
      }
      // Parameters in the real subfield come out with rounding-level imaginary parts.
      if (v.im().log2_abs() < -static_cast<double>(hp) / 2) v.im() = BigReal(0L, hp);
      ts.push_back(v / 184L);
      scaled.push_back(v * 23L / 184L);
    }
    const BigComplex h(mpq_class(1, 2), hp);
    prod *= pow(gr_real_variant(h, ts, p), 23) / gr_real_variant(h * 23L, scaled, p);
  }
  CHECK(rel_log10(prod, BigComplex::parse("13.9102308-24.0932265i", p)) < -7.5);
}
