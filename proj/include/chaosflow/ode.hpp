#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace chaosflow {

struct SolverOptions {
  enum class Method { Rk4, Rk45 };
  Method method = Method::Rk45;
  double atol = 1e-9;
  double rtol = 1e-9;
  double rk4_dt = 1e-3;  // fixed step size (sign-adjusted to the direction)
  long max_steps = 4'000'000;
};

struct OdeStats {
  long steps = 0;
  long rejected = 0;
  double h_min = std::numeric_limits<double>::infinity();
  bool ok = true;
  std::string error;
};

using OdeRhs = std::function<void(double t, std::span<const double> x, std::span<double> dxdt)>;

// Integrates x' = f(t, x) from s to t (either direction), advancing x in place.
// Rk45 is Dormand-Prince 5(4) with elementary step control; Rk4 is the classic
// fixed-step scheme for bitwise-deterministic runs.
OdeStats integrate_ode(const OdeRhs& f, double s, double t, std::vector<double>& x,
                       const SolverOptions& opts);

}  // namespace chaosflow
