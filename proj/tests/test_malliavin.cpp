#include <doctest.h>

#include <cmath>

#include "chaosflow/hermite.hpp"
#include "chaosflow/malliavin.hpp"
#include "chaosflow/random_gen.hpp"

using namespace chaosflow;

namespace {
MultiIndex mi(std::vector<int> dense) { return MultiIndex::from_dense(dense); }
}

TEST_CASE("gradient ladder") {
  GaussianSpace s(2, 4);
  // product rule: grad(x1 x2) = (x2, x1)
  ChaosPoly x1x2 = ChaosPoly::hermite(s, mi({1, 1}));
  ChaosField g = gradient(x1x2);
  CHECK(g.component(0) == ChaosPoly::coordinate(s, 1));
  CHECK(g.component(1) == ChaosPoly::coordinate(s, 0));

  // grad h2(x1) = (sqrt(2) x1, 0)
  ChaosField g2 = gradient(ChaosPoly::hermite(s, mi({2, 0})));
  CHECK(g2.component(0).coeff(mi({1, 0})) == doctest::Approx(std::sqrt(2.0)));
  CHECK(g2.component(1).is_zero());

  CHECK(gradient(ChaosPoly::constant(s, 3.0)).is_zero());
}

TEST_CASE("divergence ladder") {
  GaussianSpace s(3, 4);
  // deterministic direction: delta(e_1) = x_1
  CHECK(divergence(ChaosField::basis(s, 0)) == ChaosPoly::coordinate(s, 0));

  // rotation field has divergence zero, exactly (cancelling coefficients)
  ChaosField rot(s);
  rot.set_component(0, ChaosPoly::coordinate(s, 1));
  rot.set_component(1, -1.0 * ChaosPoly::coordinate(s, 0));
  CHECK(divergence(rot).is_zero());

  // delta(x1 e1) = sqrt(2) h2(x1) = x1^2 - 1, pinned by the adjointness oracle
  // E[(x1^2-1) phi] = E[x1 d/dx1 phi] via quadrature for phi in {1, x, h2}.
  ChaosField v(s);
  v.set_component(0, ChaosPoly::coordinate(s, 0));
  ChaosPoly dv = divergence(v);
  CHECK(dv.coeff(mi({2, 0, 0})) == doctest::Approx(std::sqrt(2.0)));
  CHECK(dv.coeffs().size() == 1);
  auto pair_with = [&](int phi_deg) {
    double lhs = gh_expect_1d(10, [&](double x) {
      return (x * x - 1.0) * hermite_value(phi_deg, x);
    });
    double rhs = gh_expect_1d(10, [&](double x) {
      return phi_deg == 0 ? 0.0
                          : x * std::sqrt(double(phi_deg)) * hermite_value(phi_deg - 1, x);
    });
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    // and the chaos object agrees with the quadrature pairing
    double chaos_lhs = gh_expect_1d(10, [&](double x) {
      std::vector<double> pt{x, 0.0, 0.0};
      return evaluate(dv, pt) * hermite_value(phi_deg, x);
    });
    CHECK(chaos_lhs == doctest::Approx(lhs).epsilon(1e-12));
  };
  pair_with(0);
  pair_with(1);
  pair_with(2);

  // divergence raises degree: overflow policy applies
  GaussianSpace tight(1, 1);
  ChaosField w(tight);
  w.set_component(0, ChaosPoly::coordinate(tight, 0));
  CHECK_THROWS_AS(divergence(w, Overflow::Error), DegreeOverflowError);
  CHECK(divergence(w, Overflow::Truncate).is_zero());
}

TEST_CASE("divergence has zero mean, always") {
  GaussianSpace s(3, 5);
  Rng rng(42);
  for (int c = 0; c < 50; ++c) {
    ChaosField v = random_field(s, 4, 5, rng);
    CHECK(expectation(divergence(v)) == 0.0);
  }
}

TEST_CASE("adjointness: E<v, grad phi> = E[phi delta v]") {
  GaussianSpace s(3, 6);
  Rng rng(4242);
  for (int c = 0; c < 100; ++c) {
    ChaosField v = random_field(s, 5, 4, rng);
    ChaosPoly phi = random_poly(s, 6, 6, rng);
    ChaosField g = gradient(phi);
    double lhs = 0.0;
    for (int i = 0; i < 3; ++i) lhs += l2_inner(v.component(i), g.component(i));
    double rhs = l2_inner(phi, divergence(v));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("spectral functions") {
  GaussianSpace s(2, 4);
  ChaosPoly h3 = ChaosPoly::hermite(s, mi({3, 0}));

  ChaosPoly lh3 = spectral_apply(h3, SpectralFunction::number_op());
  CHECK(lh3.coeff(mi({3, 0})) == 3.0);

  ChaosPoly x1x2 = ChaosPoly::hermite(s, mi({1, 1}));
  ChaosPoly r = spectral_apply(x1x2, SpectralFunction::resolvent_power(1.0));
  CHECK(r.coeff(mi({1, 1})) == doctest::Approx(1.0 / 3.0));

  // T_t h2 at t = ln 2 is h2/4
  ChaosPoly h2 = ChaosPoly::hermite(s, mi({2, 0}));
  ChaosPoly th2 = spectral_apply(h2, SpectralFunction::ou_semigroup(std::log(2.0)));
  CHECK(th2.coeff(mi({2, 0})) == doctest::Approx(0.25));

  // number operator equals divergence-of-gradient
  Rng rng(7);
  for (int c = 0; c < 30; ++c) {
    ChaosPoly p = random_poly(s, 3, 5, rng);
    ChaosPoly a = spectral_apply(p, SpectralFunction::number_op());
    ChaosPoly b = divergence(gradient(p));
    CHECK((a - b).max_abs_coeff() <= 1e-12);
  }

  CHECK_THROWS_AS(spectral_apply(ChaosPoly::constant(s, 2.0), SpectralFunction::inverse_l()),
                  std::domain_error);
  CHECK_THROWS(SpectralFunction::resolvent_power(0.0));
  CHECK_THROWS(SpectralFunction::ou_semigroup(-0.1));
}

TEST_CASE("mehler monte carlo matches the spectral route") {
  GaussianSpace s(1, 3);
  ChaosPoly h2 = ChaosPoly::hermite(s, mi({2}));
  double t = std::log(2.0);

  Batch pt;
  pt.dim = 1;
  pt.n = 1;
  pt.data = {1.0};
  // T_{ln 2} h2 at x = 1 is h2(1)/4 = 0.
  auto est = mehler_estimate(h2, t, pt, 60000, 99);
  CHECK(std::abs(est[0].mean - 0.0) <= 4.0 * est[0].std_error);

  // t = 0 is exact, no averaging
  auto e0 = mehler_estimate(h2, 0.0, pt, 10, 99);
  CHECK(e0[0].mean == evaluate(h2, std::vector<double>{1.0}));
  CHECK(e0[0].std_error == 0.0);

  // long-time limit of x1 decays to its mean (antithetic pairs estimate a
  // linear poly exactly, so the estimate is e^{-t} x with zero variance)
  ChaosPoly x = ChaosPoly::coordinate(s, 0);
  auto einf = mehler_estimate(x, 20.0, pt, 60000, 99);
  CHECK(std::abs(einf[0].mean - std::exp(-20.0)) <= 4.0 * einf[0].std_error + 1e-15);
  CHECK(std::abs(einf[0].mean) <= 1e-8);

  CHECK_THROWS(mehler_estimate(h2, 1.0, pt, 1, 99));
  CHECK_THROWS(mehler_estimate(h2, -1.0, pt, 100, 99));

  // determinism: same seed, same estimate
  auto r1 = mehler_estimate(h2, t, pt, 5000, 1234);
  auto r2 = mehler_estimate(h2, t, pt, 5000, 1234);
  CHECK(r1[0].mean == r2[0].mean);
}

TEST_CASE("conditional projection") {
  GaussianSpace s(2, 4);
  ChaosPoly x1x2 = ChaosPoly::hermite(s, mi({1, 1}));
  CHECK(conditional_project(x1x2, 1).is_zero());

  ChaosField v(s);
  v.set_component(0, ChaosPoly::coordinate(s, 0));
  v.set_component(1, x1x2);
  ChaosField pv = conditional_project(v, 1);
  CHECK(pv.component(0) == ChaosPoly::coordinate(s, 0));
  CHECK(pv.component(1).is_zero());

  // project then diverge vs diverge then project on v = (x1, x1 x2):
  // both give x1^2 - 1 = sqrt(2) h2(x1).
  ChaosPoly a = divergence(conditional_project(v, 1));
  ChaosPoly b = conditional_project(divergence(v), 1);
  CHECK(a == b);
  CHECK(a.coeff(mi({2, 0})) == doctest::Approx(std::sqrt(2.0)));
  CHECK(a.coeffs().size() == 1);

  CHECK_THROWS_AS(conditional_project(x1x2, 0), std::out_of_range);
  CHECK_THROWS_AS(conditional_project(x1x2, 3), std::out_of_range);
}

TEST_CASE("projection commutes with divergence on random fields") {
  GaussianSpace s(4, 5);
  Rng rng(11);
  for (int c = 0; c < 50; ++c) {
    ChaosField v = random_field(s, 4, 4, rng);
    int m = 1 + (c % 4);
    CHECK(divergence(conditional_project(v, m)) == conditional_project(divergence(v), m));
  }
}

TEST_CASE("sobolev norm") {
  GaussianSpace s(2, 4, {1.0, 0.5});
  ChaosPoly x1 = ChaosPoly::coordinate(s, 0);
  auto est = sobolev_norm(x1, 2.0, GradientNormMode::CameronMartin, 40000, 5);
  CHECK(std::abs(est.value - std::sqrt(2.0)) <= 4.0 * est.std_error + 1e-3);

  auto c = sobolev_norm(ChaosPoly::constant(s, -2.5), 2.0, GradientNormMode::CameronMartin, 1000, 5);
  CHECK(c.value == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(c.std_error == doctest::Approx(0.0));

  GaussianSpace no_weights(2, 4);
  CHECK_THROWS(sobolev_norm(ChaosPoly::coordinate(no_weights, 0), 2.0, GradientNormMode::Weighted,
                            100, 5));
  CHECK_THROWS(sobolev_norm(x1, 0.5, GradientNormMode::CameronMartin, 100, 5));
}

TEST_CASE("gradient-norm table for the slow hermite series") {
  auto inverse = [](long n) { return 1.0 / double(n); };

  auto rows = hermite_counterexample_demo(2, inverse, {2});
  double first = 2.0 / (std::log(2.0) * std::log(2.0));
  CHECK(rows.size() == 1);
  CHECK(rows[0].grad_norm_sq_h == doctest::Approx(first));
  CHECK(rows[0].grad_norm_sq_weighted == doctest::Approx(first * 0.25));

  // monotone increasing partial sums
  auto table = hermite_counterexample_demo(64, inverse);
  for (std::size_t i = 1; i < table.size(); ++i) {
    CHECK(table[i].grad_norm_sq_h > table[i - 1].grad_norm_sq_h);
    CHECK(table[i].grad_norm_sq_weighted > table[i - 1].grad_norm_sq_weighted);
  }

  // direct-summation oracle at m = 1000
  auto at1000 = hermite_counterexample_demo(1000, inverse, {1000});
  double h = 0.0, w = 0.0;
  for (long n = 2; n <= 1000; ++n) {
    double l = std::log(double(n));
    h += 2.0 / (l * l);
    w += 2.0 / (l * l * double(n) * double(n));
  }
  CHECK(at1000[0].grad_norm_sq_h == doctest::Approx(h).epsilon(1e-13));
  CHECK(at1000[0].grad_norm_sq_weighted == doctest::Approx(w).epsilon(1e-13));

  // cross-check the closed-form terms against an actual chaos gradient for m = 3
  GaussianSpace s(3, 6);
  ChaosPoly a3(s);
  for (long n = 2; n <= 3; ++n) {
    std::vector<int> dense(3, 0);
    dense[n - 1] = int(2 * n);
    a3.add(MultiIndex::from_dense(dense), 1.0 / (std::sqrt(double(n)) * std::log(double(n))));
  }
  ChaosField g = gradient(a3);
  double norm_sq = 0.0;
  for (int i = 0; i < 3; ++i) norm_sq += g.component(i).l2_norm_sq();
  auto demo3 = hermite_counterexample_demo(3, inverse, {3});
  CHECK(norm_sq == doctest::Approx(demo3[0].grad_norm_sq_h).epsilon(1e-12));

  CHECK_THROWS(hermite_counterexample_demo(1, inverse));
}

TEST_CASE("ou commutation and resolvent shift are exact on coefficients") {
  GaussianSpace s(3, 5);
  Rng rng(77);
  for (int c = 0; c < 30; ++c) {
    ChaosPoly phi = random_poly(s, 5, 6, rng);
    double t = 0.3;
    ChaosField lhs = gradient(spectral_apply(phi, SpectralFunction::ou_semigroup(t)));
    ChaosField rhs = std::exp(-t) * spectral_apply(gradient(phi), SpectralFunction::ou_semigroup(t));
    CHECK((lhs - rhs).max_abs_coeff() <= 1e-12);
  }
}
