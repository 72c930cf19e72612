#pragma once

#include <functional>
#include <span>
#include <vector>

namespace chaosflow {

// Orthonormal Hermite polynomials for the standard Gaussian weight:
//   E[h_m(Z) h_n(Z)] = delta_{mn},   h_n' = sqrt(n) h_{n-1},
// with the three-term recurrence
//   sqrt(n+1) h_{n+1}(x) = x h_n(x) - sqrt(n) h_{n-1}(x).
double hermite_value(int n, double x);

// Fills out[0..max_degree] with h_0(x)..h_max(x). out.size() must be max_degree+1.
void hermite_values(int max_degree, double x, std::span<double> out);

// Triple-product constant c(m,n,k) = E[h_m h_n h_k]. Zero unless m+n+k is even
// and s = (m+n+k)/2 >= max(m,n,k); otherwise sqrt of an exact integer
// (a product of three binomial coefficients), evaluated in integer arithmetic.
double hermite_triple_product(int m, int n, int k);

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;  // sum to 1; E[f(Z)] ~ sum w_i f(x_i)
};

// n-point rule for the standard Gaussian weight, exact for polynomials of
// degree <= 2n-1. Computed by Golub-Welsch on the Jacobi matrix.
GaussHermiteRule gauss_hermite(int n);

double gh_expect_1d(int n, const std::function<double(double)>& f);
double gh_expect_2d(int n, const std::function<double(double, double)>& f);

}  // namespace chaosflow
