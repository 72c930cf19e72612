#include <doctest.h>

#include <cmath>

#include "chaosflow/hermite.hpp"

using namespace chaosflow;

TEST_CASE("recurrence values") {
  // h2(x) = (x^2 - 1)/sqrt(2), h3(x) = (x^3 - 3x)/sqrt(6)
  CHECK(hermite_value(0, 3.7) == 1.0);
  CHECK(hermite_value(1, 2.5) == doctest::Approx(2.5));
  CHECK(hermite_value(2, 1.0) == doctest::Approx(0.0));
  CHECK(hermite_value(3, 2.0) == doctest::Approx(2.0 / std::sqrt(6.0)));
  CHECK(hermite_value(2, 2.0) == doctest::Approx(3.0 / std::sqrt(2.0)));

  std::vector<double> vals(7);
  hermite_values(6, 1.3, vals);
  for (int n = 0; n <= 6; ++n) CHECK(vals[n] == doctest::Approx(hermite_value(n, 1.3)));
}

TEST_CASE("normalization: h_n' = sqrt(n) h_{n-1}") {
  const double x = 0.8, h = 1e-6;
  for (int n = 1; n <= 6; ++n) {
    double deriv = (hermite_value(n, x + h) - hermite_value(n, x - h)) / (2.0 * h);
    CHECK(deriv == doctest::Approx(std::sqrt(double(n)) * hermite_value(n - 1, x)).epsilon(1e-6));
  }
}

TEST_CASE("gauss-hermite rule matches gaussian moments") {
  auto rule = gauss_hermite(12);
  double total = 0.0;
  for (double w : rule.weights) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));

  CHECK(gh_expect_1d(12, [](double x) { return x * x; }) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gh_expect_1d(12, [](double x) { return x * x * x * x; }) ==
        doctest::Approx(3.0).epsilon(1e-12));
  CHECK(gh_expect_1d(12, [](double x) { return x * x * x; }) == doctest::Approx(0.0));
}

TEST_CASE("orthonormality under quadrature") {
  for (int m = 0; m <= 8; ++m) {
    for (int n = 0; n <= 8; ++n) {
      double inner = gh_expect_1d(12, [&](double x) {
        return hermite_value(m, x) * hermite_value(n, x);
      });
      CHECK(inner == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-11));
    }
  }
}

TEST_CASE("triple products") {
  CHECK(hermite_triple_product(1, 1, 2) == doctest::Approx(std::sqrt(2.0)));
  CHECK(hermite_triple_product(1, 1, 0) == doctest::Approx(1.0));
  CHECK(hermite_triple_product(2, 1, 3) == doctest::Approx(std::sqrt(3.0)));
  CHECK(hermite_triple_product(2, 1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(hermite_triple_product(1, 1, 1) == 0.0);  // odd total degree
  CHECK(hermite_triple_product(1, 1, 4) == 0.0);  // s < max
  CHECK(hermite_triple_product(2, 2, 2) == doctest::Approx(2.0 * std::sqrt(2.0)));

  // Against quadrature across the table the product kernel uses.
  for (int m = 0; m <= 6; ++m)
    for (int n = 0; n <= 6; ++n)
      for (int k = 0; k <= 6; ++k) {
        double quad = gh_expect_1d(12, [&](double x) {
          return hermite_value(m, x) * hermite_value(n, x) * hermite_value(k, x);
        });
        CHECK(hermite_triple_product(m, n, k) == doctest::Approx(quad).epsilon(1e-10));
      }
}
