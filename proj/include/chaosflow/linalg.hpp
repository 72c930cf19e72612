#pragma once

#include <span>
#include <vector>

namespace chaosflow {

// Dense row-major n x n helpers for the small matrices this project needs
// (n <= 8 in practice).
struct Mat {
  int n = 0;
  std::vector<double> a;  // row-major

  Mat() = default;
  explicit Mat(int n_) : n(n_), a(std::size_t(n_) * n_, 0.0) {}
  double& operator()(int i, int j) { return a[std::size_t(i) * n + j]; }
  double operator()(int i, int j) const { return a[std::size_t(i) * n + j]; }
  static Mat identity(int n);
};

Mat mat_mul(const Mat& x, const Mat& y);
std::vector<double> mat_vec(const Mat& m, std::span<const double> x);
Mat mat_transpose(const Mat& m);

// Operator 2-norm via power iteration on M^T M.
double operator_norm(const Mat& m);

// Operator norm in the weighted norm |x| = |diag(q) x|: |Q M Q^{-1}|_2.
double weighted_operator_norm(const Mat& m, std::span<const double> q);

// exp(M) by scaling-and-squaring with a Taylor kernel.
Mat mat_exp(const Mat& m);

}  // namespace chaosflow
