#include <doctest.h>

#include <random>
#include <set>

#include "ellipgamma/nfield.hpp"

using namespace ellipgamma;

namespace {

std::vector<mpq_class> q(std::initializer_list<long> v) {
  std::vector<mpq_class> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

IntegerMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, long bound) {
  std::uniform_int_distribution<long> u(-bound, bound);
  IntegerMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

bool is_hnf(const IntegerMatrix& h) {
  for (std::size_t i = 0; i < h.rows(); ++i) {
    if (h(i, i) <= 0) return false;
    for (std::size_t j = 0; j < i; ++j)
      if (h(i, j) != 0) return false;
    for (std::size_t j = i + 1; j < h.cols(); ++j)
      if (h(i, j) < 0 || h(i, j) >= h(i, i)) return false;
  }
  return true;
}

// Cofactor expansion, independent of the elimination code.
mpz_class cofactor_det(const IntegerMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  mpz_class d = 0;
  for (std::size_t c = 0; c < n; ++c) {
    IntegerMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    const mpz_class t = m(0, c) * cofactor_det(minor);
    d += (c % 2 == 0) ? t : mpz_class(-t);
  }
  return d;
}

std::shared_ptr<const NumberField> cubic_411() { return NumberField::create(IntPolynomial{-2, 5, -1, 1}); }

}  // namespace

TEST_CASE("field arithmetic in Q(i)") {
  const auto k = NumberField::create(IntPolynomial{1, 0, 1});
  const auto z = k->generator();
  CHECK(z * z == k->element(q({-1})));
  CHECK(z.inverse() == k->element(q({0, -1})));
  CHECK(nf_arith(z, z, FieldOp::Add) == k->element(q({0, 2})));
  CHECK_THROWS_AS(k->element(q({0})).inverse(), Error);
}

TEST_CASE("inverse of the cubic unit") {
  const auto k = cubic_411();
  const auto eps = k->element(q({-1, 2, 1}));
  const auto inv = nf_arith(eps, eps, FieldOp::Inv);
  CHECK(eps * inv == k->one());
  // eps is a unit: its inverse has integral coordinates.
  for (const auto& c : inv.coeffs()) CHECK(c.get_den() == 1);
}

TEST_CASE("embedding respects multiplication") {
  const auto k = cubic_411();
  const BigComplex z = upper_root(k->polynomial(), 200);
  const auto a = k->element(q({3, -1, 2}));
  const auto b = k->element(q({-7, 0, 5}));
  const BigComplex lhs = (a * b).embed(z);
  const BigComplex rhs = a.embed(z) * b.embed(z);
  CHECK(abs(lhs - rhs).log2_abs() < -180);
}

TEST_CASE("determinants agree with cofactor expansion") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 30; ++t) {
    const auto m = random_matrix(rng, 4, 4, 9);
    CHECK(determinant(m) == cofactor_det(m));
  }
  const IntegerMatrix sing = IntegerMatrix::from_rows({{1, 2}, {2, 4}});
  CHECK(determinant(sing) == 0);
}

TEST_CASE("hnf: fixed points and span preservation") {
  CHECK(hnf(IntegerMatrix::identity(3)) == IntegerMatrix::identity(3));
  const IntegerMatrix h2 = IntegerMatrix::from_rows({{2, 1}, {0, 1}});
  CHECK(hnf(h2) == h2);
  std::mt19937_64 rng(99);
  for (std::size_t n : {3u, 4u}) {
    for (int t = 0; t < 25; ++t) {
      const auto m = random_matrix(rng, n, n + (t % 3), 12);
      IntegerMatrix h;
      try {
        h = hnf(m);
      } catch (const Error& e) {
        CHECK(e.code() == Errc::RankDeficient);
        continue;
      }
      CHECK(is_hnf(h));
      CHECK(hnf(h) == h);
      for (std::size_t j = 0; j < m.cols(); ++j) CHECK(in_hnf_lattice(h, m.column(j)));
      if (m.cols() == n) {
        mpz_class piv = 1;
        for (std::size_t i = 0; i < n; ++i) piv *= h(i, i);
        CHECK(piv == abs(determinant(m)));
        // Mutual membership: the HNF columns lie in the span of m.
        const RationalMatrix minv = inverse(to_rational(m));
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t i = 0; i < n; ++i) {
            mpq_class c = 0;
            for (std::size_t l = 0; l < n; ++l) c += minv(i, l) * h(l, j);
            CHECK(c.get_den() == 1);
          }
        }
      }
    }
  }
  CHECK_THROWS_AS(hnf(IntegerMatrix::from_rows({{1, 2}, {2, 4}})), Error);
}

TEST_CASE("det_form on the cubic field") {
  const auto k = cubic_411();
  const std::vector<NumberFieldElement> etas{k->element(q({-1, 2, 1}))};
  CHECK(det_form(*k, etas, k->one()) == 0);
  CHECK(det_form(*k, etas, etas[0]) == 0);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> u(-50, 50);
  for (int t = 0; t < 20; ++t) {
    const long b0 = u(rng), b1 = u(rng), b2 = u(rng);
    CHECK(det_form(*k, etas, k->element(q({b0, b1, b2}))) == 2 * b2 - b1);
  }
  // Q-linearity with rational coefficients.
  const auto x = k->element(q({1, 4, -3}));
  const auto y = k->element(q({-2, 5, 7}));
  const mpq_class a(3, 7), b(-5, 2);
  CHECK(det_form(*k, etas, x * a + y * b) == a * det_form(*k, etas, x) + b * det_form(*k, etas, y));
  CHECK_THROWS_AS(det_form(*k, {}, x), Error);
}

TEST_CASE("different of the trace form on Q(i)") {
  const auto k = NumberField::create(IntPolynomial{1, 0, 1});
  const auto d = different_of_form(*k, trace_form_values(*k));
  CHECK(d.numerator_hnf() == IntegerMatrix::from_rows({{2, 0}, {0, 2}}));
  CHECK(d.denominator() == 1);

  // Brute force: {x in (1/4)Z^2 : Tr(x w_i) in Z} inside a box is (1/2)Z^2.
  const auto inv = ideal_inverse(*k, d);
  for (long a = -8; a <= 8; ++a)
    for (long b = -8; b <= 8; ++b) {
      std::vector<mpq_class> c{mpq_class(a, 4), mpq_class(b, 4)};
      for (auto& x : c) x.canonicalize();
      const auto x = k->from_basis_coords(c);
      const bool dual = k->trace(x).get_den() == 1 && k->trace(x * k->generator()).get_den() == 1;
      CHECK(dual == inv.contains(c));
    }
}

TEST_CASE("different of the determinant form on the cubic field") {
  const auto k = cubic_411();
  const std::vector<NumberFieldElement> etas{k->element(q({-1, 2, 1}))};
  const auto ell = det_form_values(*k, etas);
  const auto d = different_of_form(*k, ell);
  CHECK(d == principal_ideal(*k, k->element(q({-3, 1}))));
  CHECK(d.norm() == 31);
  CHECK(lambda_tilde(d) == 1);
  CHECK(t_tilde(d) == 31);

  // Duality and maximality of the inverse different.
  const auto inv = ideal_inverse(*k, d);
  auto ell_of = [&](const NumberFieldElement& x) {
    const auto c = k->basis_coords(x);
    mpq_class s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * ell[i];
    return s;
  };
  for (std::size_t j = 0; j < 3; ++j) {
    const auto v = k->from_basis_coords(inv.basis_vector(j));
    for (std::size_t i = 0; i < 3; ++i) CHECK(ell_of(v * k->basis_element(i)).get_den() == 1);
    for (long p : {2L, 3L, 5L, 7L, 31L, 47L}) {
      const auto w = v * mpq_class(1, p);
      bool all_integral = true;
      for (std::size_t i = 0; i < 3; ++i) all_integral &= ell_of(w * k->basis_element(i)).get_den() == 1;
      CHECK_FALSE(all_integral);
    }
  }

  // Scaling the form scales the different.
  std::vector<mpq_class> ell5 = ell;
  for (auto& v : ell5) v *= 5;
  CHECK(different_of_form(*k, ell5) == d.scaled(5));
  CHECK_THROWS_AS(different_of_form(*k, q({0, 0, 0})), Error);
}

TEST_CASE("D cap Z for the pure cubic field of 93") {
  const auto k = NumberField::create(IntPolynomial{-93, 0, 0, 1});
  const std::vector<NumberFieldElement> etas{k->element(q({-16022, -64428, 15001}))};
  const auto ell = det_form_values(*k, etas);
  const auto d = different_of_form(*k, ell);
  // Oracle: t lies in D iff t times every column of T^{-1} is integral.
  RationalMatrix t(3, 3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) t(i, j) = det_form(*k, etas, k->basis_element(i) * k->basis_element(j));
  const auto [num, den] = clear_denominators(inverse(t));
  CHECK(lambda_tilde(d) * t_tilde(d) == den);
  CHECK(lambda_tilde(d) == 7);
  CHECK(t_tilde(d) == mpz_class("1694974614915"));
}

TEST_CASE("lambda_tilde scales with scalar ideals") {
  const auto k = cubic_411();
  const auto d = principal_ideal(*k, k->element(q({-3, 1})));
  CHECK(lambda_tilde(FractionalIdealHNF::unit(3)) == 1);
  CHECK(t_tilde(FractionalIdealHNF::unit(3)) == 1);
  CHECK(lambda_tilde(FractionalIdealHNF::unit(3).scaled(3)) == 3);
  for (long c : {1L, 2L, 6L, 35L}) CHECK(lambda_tilde(d.scaled(c)) == c * lambda_tilde(d));
}

TEST_CASE("t_min") {
  CHECK(t_min(1, {}) == 1);
  const std::vector<std::pair<mpz_class, unsigned long>> v1{{3, 1}};
  CHECK(t_min(1, v1) == 3);
  const std::vector<std::pair<mpz_class, unsigned long>> v2{{5, 2}};
  CHECK(t_min(2, v2) == 50);
}

TEST_CASE("integral basis with denominators") {
  // Quartic field with basis 1, z, (z^3-2z^2-2z-4)/5, (2z^3+z^2-9z-23)/5.
  const std::vector<std::vector<mpq_class>> basis{
      q({1}), q({0, 1}),
      {mpq_class(-4, 5), mpq_class(-2, 5), mpq_class(-2, 5), mpq_class(1, 5)},
      {mpq_class(-23, 5), mpq_class(-9, 5), mpq_class(1, 5), mpq_class(2, 5)}};
  const auto k = NumberField::create(IntPolynomial{16, -11, -4, -1, 1}, basis);
  CHECK_FALSE(k->has_power_basis());
  // The basis spans a ring: products of basis elements have integral coordinates.
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (const auto& c : k->basis_coords(k->basis_element(i) * k->basis_element(j))) CHECK(c.get_den() == 1);
  const auto w = k->basis_element(2);
  CHECK(k->from_basis_coords(k->basis_coords(w)) == w);
  // Trace form different of a maximal order has norm |disc|.
  const auto d = different_of_form(*k, trace_form_values(*k));
  CHECK(d.is_integral());
  CHECK(d.norm() > 0);
}

TEST_CASE("parallelepiped enumeration") {
  const IntegerMatrix id2 = IntegerMatrix::identity(2);
  const auto one = parallelepiped_points({{{1, 0}}}, {0, 1}, id2);
  CHECK(one.lattice_coords.size() == 1);
  const auto two = parallelepiped_points({{{2, 0}}}, {0, 1}, id2);
  REQUIRE(two.lattice_coords.size() == 2);
  std::set<std::vector<mpz_class>> pts(two.lattice_coords.begin(), two.lattice_coords.end());
  CHECK(pts == std::set<std::vector<mpz_class>>{{0, 0}, {1, 0}});
  CHECK_THROWS_AS(parallelepiped_points({{{1, 1}}}, {2, 2}, id2), Error);

  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> u(-4, 4);
  int tested = 0;
  while (tested < 30) {
    std::vector<std::vector<mpz_class>> cols(3, std::vector<mpz_class>(3));
    for (auto& c : cols)
      for (auto& x : c) x = u(rng);
    const IntegerMatrix m = IntegerMatrix::from_columns(cols);
    const mpz_class det = abs(determinant(m));
    if (det == 0 || det > 20) continue;
    ++tested;
    const auto res = parallelepiped_points({cols[0], cols[1]}, cols[2], IntegerMatrix::identity(3));
    CHECK(res.lattice_coords.size() == det.get_ui());
    // Box scan oracle over the bounding box of the parallelepiped.
    const RationalMatrix minv = inverse(to_rational(m));
    std::set<std::vector<mpz_class>> brute;
    for (long a = -12; a <= 12; ++a)
      for (long b = -12; b <= 12; ++b)
        for (long c = -12; c <= 12; ++c) {
          const long v[3] = {a, b, c};
          bool inside = true;
          for (std::size_t i = 0; i < 3 && inside; ++i) {
            mpq_class mu = 0;
            for (std::size_t j = 0; j < 3; ++j) mu += minv(i, j) * v[j];
            inside = mu >= 0 && mu < 1;
          }
          if (inside) brute.insert({a, b, c});
        }
    std::set<std::vector<mpz_class>> got(res.lattice_coords.begin(), res.lattice_coords.end());
    CHECK(got == brute);
  }
}
