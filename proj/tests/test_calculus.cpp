#include "usym/calculus.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace usym;

TEST_CASE("measure merges coincident atoms") {
  const Measure m({{1.0, 0.5}, {-1.0, 0.25}, {1.0 + 1e-14, 0.5}});
  REQUIRE(m.atoms().size() == 2);
  CHECK(m.atoms()[0].t == -1.0);
  CHECK(m.atoms()[1].w == Complex(1.0));
  CHECK(m.tv() == doctest::Approx(1.25));
}

TEST_CASE("transform, shift and convolution") {
  const Measure a({{0.5, Complex(1, 1)}, {-2.0, 0.3}});
  const Measure b({{1.0, 2.0}, {0.25, Complex(0, -1)}});
  for (double x : {-1.0, 0.0, 0.8}) {
    CHECK(std::abs(convolve(a, b).transform(x) - a.transform(x) * b.transform(x)) < 1e-13);
    CHECK(std::abs(a.shifted(0.7).transform(x) - a.transform(x + 0.7)) < 1e-13);
    CHECK(std::abs((a + b).transform(x) - a.transform(x) - b.transform(x)) < 1e-13);
  }
}

TEST_CASE("triangle measure reproduces the wave") {
  const double L = 2;
  const int K = 999;
  const Measure mu = linear_symbol_measure(L, K);
  CHECK(mu.tv() == doctest::Approx(1 - triangle_tail(K)).epsilon(1e-12));
  for (double x : {-2.0, -1.1, 0.0, 0.5, 2.0}) {
    const Complex y = -L * mu.transform(x + L);
    CHECK(std::abs(y - x) <= L * triangle_tail(K) + 1e-12);
  }
  CHECK_THROWS_AS(linear_symbol_measure(L, 10), std::invalid_argument);
}

TEST_CASE("tail sum is below 8 / (pi^2 K)") {
  for (int K : {1, 9, 99, 999}) CHECK(triangle_tail(K) <= 8 / (std::numbers::pi * std::numbers::pi * K));
}

TEST_CASE("Bochner on a diagonal element applies the transform entrywise") {
  Eigen::VectorXcd d(3);
  d << -1, 0.5, 2;
  const Measure mu({{0.3, 2.0}, {-1.0, Complex(0, 1)}});
  const auto r = bochner_apply(mu, AlgebraElement::diag_lp(2, d));
  for (int k = 0; k < 3; ++k) CHECK(std::abs(r.values(k) - mu.transform(d(k).real())) < 1e-14);
  CHECK(norm_bound_check(mu, AlgebraElement::diag_lp(2, d)) >= -1e-12);
}

TEST_CASE("holomorphic route refuses non-polynomials") {
  const auto a = AlgebraElement::self_adjoint(random_self_adjoint(3, 1, 1));
  CHECK_THROWS(holomorphic_apply(parse_symbol("exp(i*x)"), a));
  const auto h = holomorphic_apply(parse_symbol("x^2"), a);
  CHECK((h.matrix - a.matrix * a.matrix).norm() < 1e-13);
}

TEST_CASE("spectral mapping on diagonal and multiplier input") {
  Eigen::VectorXcd d(4);
  d << -1.5, -0.2, 0.7, 1.1;
  CHECK(spectral_mapping_check(parse_symbol("x^3-2i*x"), AlgebraElement::diag_lp(2, d)) < 1e-12);
  CHECK(spectral_mapping_check(parse_symbol("exp(i*x)"), AlgebraElement::generator(5)) < 1e-12);
  CHECK_THROWS(spectral_mapping_check(parse_symbol("x"), AlgebraElement::self_adjoint(random_self_adjoint(3, 1, 1))));
}

TEST_CASE("linear and quadratic routes agree with the polynomial route") {
  const auto rows = calculus_experiment(6, 2.0, 999, 42, 3, true);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.route_gap <= r.route_bound);
    CHECK(r.slack >= -1e-8);
    CHECK(r.quadratic_gap <= r.quadratic_bound);
  }
}
