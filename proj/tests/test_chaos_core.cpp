#include <doctest.h>

#include <cmath>

#include "chaosflow/chaos_field.hpp"
#include "chaosflow/hermite.hpp"
#include "chaosflow/montecarlo.hpp"

using namespace chaosflow;

namespace {
MultiIndex mi(std::vector<int> dense) { return MultiIndex::from_dense(dense); }
}

TEST_CASE("linear_combine") {
  GaussianSpace s(2, 4);
  ChaosPoly x1 = ChaosPoly::coordinate(s, 0);

  ChaosPoly doubled = linear_combine({{1.0, x1}, {1.0, x1}});
  CHECK(doubled.coeff(mi({1, 0})) == 2.0);
  CHECK(doubled.coeffs().size() == 1);

  ChaosPoly cancelled = x1 - x1;
  CHECK(cancelled.is_zero());
  CHECK(cancelled.coeffs().empty());  // canonical sparsity: no stored zeros

  ChaosPoly h2a = ChaosPoly::hermite(s, mi({2, 0}), 2.0);
  ChaosPoly h2b = ChaosPoly::hermite(s, mi({0, 2}), 3.0);
  ChaosPoly sum = h2a + h2b;
  CHECK(sum.coeff(mi({2, 0})) == 2.0);
  CHECK(sum.coeff(mi({0, 2})) == 3.0);
  CHECK(sum.coeffs().size() == 2);

  GaussianSpace other(3, 4);
  CHECK_THROWS_AS(linear_combine({{1.0, x1}, {1.0, ChaosPoly::coordinate(other, 0)}}),
                  DimensionMismatchError);
}

TEST_CASE("multiply: 1-d squares against the quadrature oracle") {
  GaussianSpace s(1, 4);
  ChaosPoly x = ChaosPoly::coordinate(s, 0);
  ChaosPoly sq = multiply(x, x);
  // Oracle: quadrature of x^2 against h0 and h2; analytically x^2 = sqrt(2) h2 + 1.
  double c0 = gh_expect_1d(8, [](double t) { return t * t; });
  double c2 = gh_expect_1d(8, [](double t) { return t * t * hermite_value(2, t); });
  CHECK(sq.coeff(MultiIndex{}) == doctest::Approx(c0).epsilon(1e-12));
  CHECK(sq.coeff(mi({2})) == doctest::Approx(c2).epsilon(1e-12));
  CHECK(sq.coeff(mi({2})) == doctest::Approx(std::sqrt(2.0)));
  CHECK(sq.coeffs().size() == 2);
}

TEST_CASE("multiply: independent factors stay tensor") {
  GaussianSpace s(2, 4);
  ChaosPoly p = multiply(ChaosPoly::coordinate(s, 0), ChaosPoly::coordinate(s, 1));
  CHECK(p.coeff(mi({1, 1})) == 1.0);
  CHECK(p.coeffs().size() == 1);
}

TEST_CASE("multiply: h2 * h1 with cap 3") {
  GaussianSpace s(1, 3);
  ChaosPoly p = multiply(ChaosPoly::hermite(s, mi({2})), ChaosPoly::coordinate(s, 0));
  double c3 = gh_expect_1d(8, [](double t) {
    return hermite_value(2, t) * t * hermite_value(3, t);
  });
  double c1 = gh_expect_1d(8, [](double t) { return hermite_value(2, t) * t * t; });
  CHECK(p.coeff(mi({3})) == doctest::Approx(c3).epsilon(1e-12));
  CHECK(p.coeff(mi({1})) == doctest::Approx(c1).epsilon(1e-12));
  CHECK(p.coeff(mi({3})) == doctest::Approx(std::sqrt(3.0)));
  CHECK(p.coeff(mi({1})) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("multiply: overflow policy") {
  GaussianSpace s(1, 3);
  ChaosPoly h2 = ChaosPoly::hermite(s, mi({2}));
  CHECK_THROWS_AS(multiply(h2, h2, Overflow::Error), DegreeOverflowError);
  // Truncated product keeps the within-cap part: h2*h2 = sqrt(6) h4? ... below cap:
  // h2^2 = (2 sqrt(6)/... ) -- compare against quadrature for k <= 3.
  ChaosPoly trunc = multiply(h2, h2, Overflow::Truncate);
  for (int k = 0; k <= 3; ++k) {
    double want = gh_expect_1d(10, [&](double t) {
      double h = hermite_value(2, t);
      return h * h * hermite_value(k, t);
    });
    CHECK(trunc.coeff(mi({k})) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("multiply against quadrature for every in-cap degree pair") {
  GaussianSpace s(1, 6);
  for (int m = 0; m <= 6; ++m)
    for (int n = 0; m + n <= 6; ++n) {
      ChaosPoly prod = multiply(ChaosPoly::hermite(s, mi({m})), ChaosPoly::hermite(s, mi({n})));
      for (int k = 0; k <= 6; ++k) {
        double want = gh_expect_1d(12, [&](double t) {
          return hermite_value(m, t) * hermite_value(n, t) * hermite_value(k, t);
        });
        CHECK(prod.coeff(mi({k})) == doctest::Approx(want).epsilon(1e-10));
      }
    }
}

TEST_CASE("evaluate") {
  GaussianSpace s(2, 4);
  std::vector<double> at_one{1.0, 0.0};
  CHECK(evaluate(ChaosPoly::hermite(s, mi({2, 0})), at_one) == doctest::Approx(0.0));
  std::vector<double> p23{2.0, 3.0};
  CHECK(evaluate(ChaosPoly::hermite(s, mi({1, 1})), p23) == doctest::Approx(6.0));
  std::vector<double> p2{2.0, 0.0};
  CHECK(evaluate(ChaosPoly::hermite(s, mi({3, 0})), p2) ==
        doctest::Approx(2.0 / std::sqrt(6.0)));
}

TEST_CASE("expectation and inner product") {
  GaussianSpace s(2, 4);
  CHECK(expectation(ChaosPoly::hermite(s, mi({2, 0}))) == 0.0);
  ChaosPoly x1x2 = multiply(ChaosPoly::coordinate(s, 0), ChaosPoly::coordinate(s, 1));
  CHECK(l2_inner(x1x2, x1x2) == 1.0);

  // E[x1^2] via multiply + expectation, Monte-Carlo oracle at a million samples.
  ChaosPoly sq = multiply(ChaosPoly::coordinate(s, 0), ChaosPoly::coordinate(s, 0));
  CHECK(expectation(sq) == doctest::Approx(1.0));
  Batch batch = sample_gaussian(2, 1000000, 777);
  auto rep = estimate([](std::span<const double> x) { return x[0] * x[0]; }, batch);
  CHECK(std::abs(rep.est.mean - expectation(sq)) <= 4.0 * rep.est.std_error);
}

TEST_CASE("field_pair") {
  GaussianSpace s(2, 4);
  ChaosField u(s);
  u.set_component(0, ChaosPoly::coordinate(s, 1));
  u.set_component(1, -1.0 * ChaosPoly::coordinate(s, 0));

  ChaosPoly p = field_pair(u, u);
  // x2^2 + x1^2 = sqrt(2) h2(x1) + sqrt(2) h2(x2) + 2, checked against 2-d quadrature.
  double mean = gh_expect_2d(8, [](double a, double b) { return a * a + b * b; });
  double c20 = gh_expect_2d(8, [](double a, double b) {
    return (a * a + b * b) * hermite_value(2, a);
  });
  CHECK(p.coeff(MultiIndex{}) == doctest::Approx(mean).epsilon(1e-12));
  CHECK(p.coeff(mi({2, 0})) == doctest::Approx(c20).epsilon(1e-12));
  CHECK(p.coeff(mi({0, 2})) == doctest::Approx(std::sqrt(2.0)));

  CHECK(field_pair(ChaosField::basis(s, 0), ChaosField::basis(s, 1)).is_zero());
  CHECK(expectation(field_pair(ChaosField::basis(s, 0), ChaosField::basis(s, 0))) == 1.0);
}

TEST_CASE("degree cap is a hard invariant") {
  GaussianSpace s(2, 3);
  ChaosPoly p(s);
  CHECK_THROWS_AS(p.set(mi({2, 2}), 1.0), DegreeOverflowError);
  CHECK_THROWS_AS(ChaosPoly::hermite(s, mi({0, 4})), DegreeOverflowError);
  CHECK_THROWS_AS(GaussianSpace(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(GaussianSpace(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(GaussianSpace(2, 3, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(GaussianSpace(2, 3, {1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("multi-index ordering and canonical form") {
  auto a = mi({1, 0, 2});
  auto b = mi({1, 0, 2, 0});  // trailing zero: same value
  CHECK(a == b);
  CHECK(a.degree() == 3);
  CHECK(a.exponent(2) == 2);
  CHECK(a.exponent(1) == 0);
  CHECK(mi({1, 1}).lowered(0) == mi({0, 1}));
  CHECK(mi({1, 1}).raised(2) == mi({1, 1, 1}));
  CHECK_THROWS(mi({0, 1}).lowered(0));
}
