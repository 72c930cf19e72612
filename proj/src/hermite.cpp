#include "chaosflow/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace chaosflow {

double hermite_value(int n, double x) {
  if (n < 0) throw std::invalid_argument("hermite_value: negative degree");
  double prev = 0.0, cur = 1.0;
  for (int k = 0; k < n; ++k) {
    double next = (x * cur - std::sqrt(double(k)) * prev) / std::sqrt(double(k + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

void hermite_values(int max_degree, double x, std::span<double> out) {
  if (int(out.size()) != max_degree + 1)
    throw std::invalid_argument("hermite_values: bad output span");
  out[0] = 1.0;
  if (max_degree == 0) return;
  out[1] = x;
  for (int k = 1; k < max_degree; ++k)
    out[k + 1] = (x * out[k] - std::sqrt(double(k)) * out[k - 1]) / std::sqrt(double(k + 1));
}

namespace {

// Pascal's triangle binomials, exact in uint64 for the supported degree range.
std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t row[64];
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    row[i] = 1;
    for (int j = i - 1; j >= 1; --j) row[j] += row[j - 1];
  }
  return row[k];
}

}  // namespace

double hermite_triple_product(int m, int n, int k) {
  if (m < 0 || n < 0 || k < 0) return 0.0;
  int total = m + n + k;
  if (total % 2 != 0) return 0.0;
  int s = total / 2;
  if (s < m || s < n || s < k) return 0.0;
  // c^2 = C(m, s-n) * C(n, s-m) * C(k, s-m) ... with the complementary gaps
  // u = s-m, v = s-n, w = s-k (u+v+w = s):
  //   c = sqrt( C(m, v) * C(n, u) * C(k, u) ),  since m = v+w, n = u+w, k = u+v.
  int u = s - m, v = s - n;
  std::uint64_t c2 = binomial(m, v) * binomial(n, u) * binomial(k, u);
  return std::sqrt(double(c2));
}

GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need n >= 1");
  // Jacobi matrix for the orthonormal recurrence: zero diagonal, off-diagonal sqrt(k).
  std::vector<double> d(n, 0.0), e(n, 0.0);
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(double(k));
  // Track only the first row of the accumulated eigenvector matrix; weights are
  // its squared entries (total mass 1).
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;

  // Implicit QL with Wilkinson shifts (tql2 specialized to a first-row vector).
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    while (true) {
      int mIdx = l;
      for (; mIdx < n - 1; ++mIdx) {
        double dd = std::abs(d[mIdx]) + std::abs(d[mIdx + 1]);
        if (std::abs(e[mIdx]) <= 1e-15 * dd) break;
      }
      if (mIdx == l) break;
      if (++iter > 60) throw std::runtime_error("gauss_hermite: QL failed to converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[mIdx] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
      double s = 1.0, c = 1.0, p = 0.0;
      for (int i = mIdx - 1; i >= l; --i) {
        double f = s * e[i], b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[mIdx] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        double zi = z[i], zi1 = z[i + 1];
        z[i + 1] = s * zi + c * zi1;
        z[i] = c * zi - s * zi1;
      }
      if (e[l] == 0.0 && l < mIdx) continue;
      d[l] -= p;
      e[l] = g;
      e[mIdx] = 0.0;
    }
  }

  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = d[order[i]];
    rule.weights[i] = z[order[i]] * z[order[i]];
  }
  return rule;
}

double gh_expect_1d(int n, const std::function<double(double)>& f) {
  auto rule = gauss_hermite(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += rule.weights[i] * f(rule.nodes[i]);
  return acc;
}

double gh_expect_2d(int n, const std::function<double(double, double)>& f) {
  auto rule = gauss_hermite(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) acc += rule.weights[i] * rule.weights[j] * f(rule.nodes[i], rule.nodes[j]);
  return acc;
}

}  // namespace chaosflow
