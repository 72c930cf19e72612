#include "chaosflow/ode.hpp"

#include <algorithm>
#include <cmath>

namespace chaosflow {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 4th-order weights for the embedded error estimate.
constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                 e6 = 187.0 / 2100, e7 = 1.0 / 40;

OdeStats integrate_rk45(const OdeRhs& f, double s, double t, std::vector<double>& x,
                        const SolverOptions& opts) {
  OdeStats stats;
  const std::size_t n = x.size();
  const double dir = t >= s ? 1.0 : -1.0;
  const double span = std::abs(t - s);
  if (span == 0.0) return stats;
  double time = s;
  double h = dir * std::min(span, std::max(1e-6, span / 100.0));
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), xt(n), x5(n), err(n);
  bool have_k1 = false;
  while (dir * (t - time) > 0.0) {
    if (stats.steps + stats.rejected > opts.max_steps) {
      stats.ok = false;
      stats.error = "max step count exceeded";
      return stats;
    }
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(time))) {
      stats.ok = false;
      stats.error = "step size underflow";
      return stats;
    }
    if (dir * (time + h - t) > 0.0) h = t - time;
    if (!have_k1) f(time, x, k1);
    for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + h * a21 * k1[i];
    f(time + c2 * h, xt, k2);
    for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(time + c3 * h, xt, k3);
    for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(time + c4 * h, xt, k4);
    for (std::size_t i = 0; i < n; ++i)
      xt[i] = x[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(time + c5 * h, xt, k5);
    for (std::size_t i = 0; i < n; ++i)
      xt[i] = x[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(time + h, xt, k6);
    for (std::size_t i = 0; i < n; ++i)
      x5[i] = x[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(time + h, x5, k7);

    double err_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double x4 = x[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                              e7 * k7[i]);
      double scale = opts.atol + opts.rtol * std::max(std::abs(x[i]), std::abs(x5[i]));
      double d = (x5[i] - x4) / scale;
      err_norm += d * d;
    }
    err_norm = std::sqrt(err_norm / double(n));

    if (err_norm <= 1.0) {
      time += h;
      x = x5;
      k1 = k7;  // FSAL
      have_k1 = true;
      ++stats.steps;
      stats.h_min = std::min(stats.h_min, std::abs(h));
    } else {
      ++stats.rejected;
      have_k1 = true;  // k1 still valid at unchanged time
    }
    double factor = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
    factor = std::clamp(factor, 0.2, 5.0);
    h *= factor;
  }
  return stats;
}

OdeStats integrate_rk4(const OdeRhs& f, double s, double t, std::vector<double>& x,
                       const SolverOptions& opts) {
  OdeStats stats;
  const std::size_t n = x.size();
  const double span = t - s;
  if (span == 0.0) return stats;
  long steps = std::max<long>(1, long(std::ceil(std::abs(span) / opts.rk4_dt)));
  if (steps > opts.max_steps) {
    stats.ok = false;
    stats.error = "max step count exceeded";
    return stats;
  }
  const double h = span / double(steps);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), xt(n);
  double time = s;
  for (long step = 0; step < steps; ++step) {
    f(time, x, k1);
    for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * h * k1[i];
    f(time + 0.5 * h, xt, k2);
    for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + 0.5 * h * k2[i];
    f(time + 0.5 * h, xt, k3);
    for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + h * k3[i];
    f(time + h, xt, k4);
    for (std::size_t i = 0; i < n; ++i)
      x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    time = s + double(step + 1) * h;
    ++stats.steps;
  }
  stats.h_min = std::abs(h);
  return stats;
}

}  // namespace

OdeStats integrate_ode(const OdeRhs& f, double s, double t, std::vector<double>& x,
                       const SolverOptions& opts) {
  return opts.method == SolverOptions::Method::Rk45 ? integrate_rk45(f, s, t, x, opts)
                                                    : integrate_rk4(f, s, t, x, opts);
}

}  // namespace chaosflow
