#pragma once

#include "chaosflow/ode.hpp"
#include "chaosflow/vector_field.hpp"

namespace chaosflow {

struct FlowOptions {
  SolverOptions solver;
  bool want_density = false;            // also compute log Lambda_{s,t} at each start point
  std::vector<double> record_times;     // defaults to {t}
};

struct FlowResult {
  double s = 0.0, t = 0.0;
  Batch start;
  std::vector<double> record_times;
  // trajectories[i]: record_times.size() x dim states, flattened row-major.
  std::vector<std::vector<double>> trajectories;
  std::vector<double> log_density;  // per sample; empty unless requested
  std::vector<unsigned char> sample_ok;
  std::vector<std::string> sample_error;
  long failed = 0;
  long total_steps = 0;
  double min_step = std::numeric_limits<double>::infinity();

  std::span<const double> state_at(long sample, std::size_t time_index) const {
    const int dim = start.dim;
    return std::span<const double>(trajectories[sample].data() + time_index * dim, std::size_t(dim));
  }
  std::span<const double> endpoint(long sample) const {
    return state_at(sample, record_times.size() - 1);
  }
};

// Per-sample solution of dx/dr = v_r(x) from s to t (backward runs allowed).
FlowResult integrate_flow(const VectorFieldSpec& field, double s, double t, const Batch& x0,
                          const FlowOptions& opts = {});

enum class DensityMode { DivergenceIntegral, AnalyticChangeOfVariables };

// log Lambda_{s,t} at the given points: either by integrating the divergence
// along the reverse-time path from (t, y), or by the registry's closed-form
// change of variables (cross-validation route).
std::vector<double> density_along_flow(const VectorFieldSpec& field, double s, double t,
                                       const Batch& points, DensityMode mode,
                                       const SolverOptions& solver = {});

// sup over the batch of |T_{r,t}(x) - T_{s,t}(T_{r,s}(x))| (weighted norm when
// the profile is non-empty).
double flow_law_residual(const VectorFieldSpec& field, double r, double s, double t,
                         const Batch& batch, const SolverOptions& solver = {},
                         std::span<const double> weight_profile = {});

// For autonomous fields: sup over the batch of |T_{0,s+t} - T_{0,s}(T_{0,t})|.
double group_law_residual(const VectorFieldSpec& field, double s, double t, const Batch& batch,
                          const SolverOptions& solver = {});

// Galerkin truncation v^(m) = E_m(pi_m v): chaos support restricted to the
// first m directions and components beyond m zeroed, node by node.
VectorFieldSpec galerkin_truncate(const VectorFieldSpec& field, int m);

struct GalerkinRow {
  int m = 0;
  double flow_deviation = 0.0;  // E sup over the checkpoint grid, weighted norm
  double field_gap = 0.0;       // (int E |v^(m) - v|^p dr)^(1/p)
  double ratio = 0.0;           // flow_deviation / field_gap (0 when gap is 0)
};

std::vector<GalerkinRow> galerkin_convergence(const VectorFieldSpec& field,
                                              const std::vector<int>& ms, double s, double t,
                                              const Batch& batch, const SolverOptions& solver = {},
                                              double p = 2.0, int checkpoints = 9);

struct MomentDiagnostics {
  Estimate gamma_h;
  Estimate gamma_w;
  double theta = 0.0;
  bool stable = true;
};

// Monte-Carlo estimates of
//   Gamma_H(theta) = E int_a^b exp theta( |grad u_t|_op + |delta u_t| ) dt
//   Gamma_W(theta) = max_m E int_a^b exp theta |pi_m grad B_t pi_m|_W dt
// for a supplied decomposition v = u + B (pass b_part = nullptr for B = 0).
MomentDiagnostics exp_moment_diagnostics(const VectorFieldSpec& u_part,
                                         const VectorFieldSpec* b_part, double theta, long n_samples,
                                         std::uint64_t seed, int time_nodes = 9,
                                         std::span<const double> weight_profile = {});

struct DensityLpCheck {
  Estimate moment;     // E Lambda^p
  double bound = 0.0;  // e^{1/p} (1 + (2p-2)/theta sqrt(Gamma_H Gamma_W))
  double gamma_h = 0.0, gamma_w = 0.0;
  bool pass = false;  // moment.mean <= bound + 4 SE
};

// Enforces the admissible window |t-s| < theta/(2p).
DensityLpCheck density_lp_check(const VectorFieldSpec& field, double s, double t, double p,
                                double theta, long n_samples, std::uint64_t seed,
                                const SolverOptions& solver = {});

// Weighted evaluation points: Monte-Carlo (equal weights) or a tensor
// Gauss-Hermite rule (deterministic, exact for polynomial integrands).
struct WeightedPoints {
  Batch points;
  std::vector<double> weights;
};

WeightedPoints weighted_points_mc(int dim, long n, std::uint64_t seed);
WeightedPoints weighted_points_gh(int dim, int nodes_per_dim);

struct DerivativeCheck {
  struct Row {
    double h = 0.0;
    double pairing = 0.0;  // E phi (Lambda_{s,s+h} - 1)/h
    double error = 0.0;    // |pairing - target|
  };
  std::vector<Row> rows;
  double target = 0.0;        // E phi delta v_s
  double extrapolated = 0.0;  // h -> 0 limit from the two smallest h
  double rate = 0.0;          // log-log slope of error vs h
};

DerivativeCheck density_derivative_check(const VectorFieldSpec& field, double s,
                                         const std::vector<double>& hs, const ChaosPoly& phi,
                                         const WeightedPoints& rule,
                                         const SolverOptions& solver = {});

struct AdaptednessReport {
  bool field_adapted = false;
  int offending_component = -1;  // 0-based, -1 when adapted
  struct ThetaRow {
    double theta = 0.0;
    int m = 0;
    double max_influence = 0.0;
    bool pass = false;
  };
  std::vector<ThetaRow> rows;
  bool flow_pass = true;
};

// Field adaptedness: component i may depend only on directions 1..i.
// Flow probe: perturbing start coordinates beyond m = ceil(theta dim) must not
// move coordinates 1..m (fixed-step RK4 keeps the comparison exact).
AdaptednessReport adaptedness_check(const VectorFieldSpec& field, double s, double t,
                                    const std::vector<double>& theta_grid, const Batch& probes,
                                    double tol = 1e-7);

struct TransportPdeRow {
  double t = 0.0;
  double residual = 0.0;           // |df/dt - delta(A grad f)|_{L^2}, exact pullback route
  double pathwise_residual = 0.0;  // RMS mismatch of the numeric-flow difference quotient
  double identity_gap = 0.0;       // |delta(A grad f) - <grad f, B>|_{L^2}
};

// Transport checks for a constant antisymmetric A: f(t) = f0 o T_t where T is
// the flow of B = op_divergence(A^T); f(t) and df/dt are produced by the exact
// linear pullback (tensor Gauss-Hermite projection, exact for polynomials).
std::vector<TransportPdeRow> transport_pde_residual(const ChaosMatrix& a, const ChaosPoly& f0,
                                                    const std::vector<double>& t_grid,
                                                    const Batch& batch,
                                                    const SolverOptions& solver = {});

// Both sides of E[f o T_{s,t}] = E[f Lambda_{s,t}] from one flow result
// (requires log densities).
std::pair<Estimate, Estimate> pushforward_pair(
    const std::function<double(std::span<const double>)>& f, const FlowResult& flow);

// Per-coordinate two-sample KS between flow endpoints and a fresh Gaussian batch.
std::vector<KsResult> measure_preservation_ks(const FlowResult& flow, std::uint64_t fresh_seed,
                                              double alpha);

}  // namespace chaosflow
