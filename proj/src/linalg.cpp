#include "chaosflow/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace chaosflow {

Mat Mat::identity(int n) {
  Mat m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Mat mat_mul(const Mat& x, const Mat& y) {
  if (x.n != y.n) throw std::invalid_argument("mat_mul: size mismatch");
  Mat out(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      double xi = x(i, k);
      if (xi == 0.0) continue;
      for (int j = 0; j < x.n; ++j) out(i, j) += xi * y(k, j);
    }
  return out;
}

std::vector<double> mat_vec(const Mat& m, std::span<const double> x) {
  if (int(x.size()) != m.n) throw std::invalid_argument("mat_vec: size mismatch");
  std::vector<double> out(m.n, 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) out[i] += m(i, j) * x[j];
  return out;
}

Mat mat_transpose(const Mat& m) {
  Mat out(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) out(i, j) = m(j, i);
  return out;
}

double operator_norm(const Mat& m) {
  const int n = m.n;
  if (n == 0) return 0.0;
  // Power iteration on M^T M with a fixed start vector.
  std::vector<double> v(n, 1.0 / std::sqrt(double(n))), w(n), u(n);
  double lambda = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    for (int i = 0; i < n; ++i) {
      w[i] = 0.0;
      for (int j = 0; j < n; ++j) w[i] += m(i, j) * v[j];
    }
    for (int j = 0; j < n; ++j) {
      u[j] = 0.0;
      for (int i = 0; i < n; ++i) u[j] += m(i, j) * w[i];
    }
    double norm = 0.0;
    for (double x : u) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;
    double next = norm;
    for (int j = 0; j < n; ++j) v[j] = u[j] / norm;
    if (iter > 8 && std::abs(next - lambda) <= 1e-14 * std::max(1.0, next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

double weighted_operator_norm(const Mat& m, std::span<const double> q) {
  if (int(q.size()) != m.n) throw std::invalid_argument("weighted_operator_norm: profile mismatch");
  Mat scaled(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) scaled(i, j) = q[i] * m(i, j) / q[j];
  return operator_norm(scaled);
}

Mat mat_exp(const Mat& m) {
  // Scale so the max-abs row sum is below 1/2, run Taylor to machine precision,
  // square back.
  double norm = 0.0;
  for (int i = 0; i < m.n; ++i) {
    double row = 0.0;
    for (int j = 0; j < m.n; ++j) row += std::abs(m(i, j));
    norm = std::max(norm, row);
  }
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  Mat x(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) x(i, j) = m(i, j) * scale;
  Mat result = Mat::identity(m.n);
  Mat term = Mat::identity(m.n);
  for (int k = 1; k <= 24; ++k) {
    term = mat_mul(term, x);
    for (auto& t : term.a) t /= double(k);
    for (std::size_t idx = 0; idx < term.a.size(); ++idx) result.a[idx] += term.a[idx];
  }
  for (int s = 0; s < squarings; ++s) result = mat_mul(result, result);
  return result;
}

}  // namespace chaosflow
