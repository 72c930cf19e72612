#include "chaosflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "chaosflow/hermite.hpp"

namespace chaosflow {

namespace {

OdeRhs field_rhs(const VectorFieldSpec& field) {
  return [&field](double t, std::span<const double> x, std::span<double> dx) {
    field.value(t, x, dx);
  };
}

// Augmented reverse-time system for the density: state (x, L) with x(t) = y,
// integrated from t to s; log Lambda_{s,t}(y) = -L(s).
OdeRhs density_rhs(const VectorFieldSpec& field) {
  return [&field](double t, std::span<const double> z, std::span<double> dz) {
    const int dim = int(z.size()) - 1;
    field.value(t, z.subspan(0, dim), dz.subspan(0, dim));
    dz[dim] = field.divergence_value(t, z.subspan(0, dim));
  };
}

double norm_deviation(std::span<const double> a, std::span<const double> b,
                      std::span<const double> weights) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    if (!weights.empty()) d *= weights[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

FlowResult integrate_flow(const VectorFieldSpec& field, double s, double t, const Batch& x0,
                          const FlowOptions& opts) {
  if (x0.dim != field.dim()) throw DimensionMismatchError("integrate_flow: batch dim mismatch");
  FlowResult res;
  res.s = s;
  res.t = t;
  res.start = x0;
  res.record_times = opts.record_times;
  if (res.record_times.empty()) res.record_times = {t};
  if (res.record_times.back() != t) res.record_times.push_back(t);

  OdeRhs rhs = field_rhs(field);
  res.trajectories.resize(x0.n);
  res.sample_ok.assign(x0.n, 1);
  res.sample_error.assign(x0.n, {});
  if (opts.want_density) res.log_density.assign(x0.n, 0.0);

  for (long i = 0; i < x0.n; ++i) {
    auto row = x0.row(i);
    std::vector<double> x(row.begin(), row.end());
    auto& traj = res.trajectories[i];
    traj.reserve(res.record_times.size() * x0.dim);
    double current = s;
    for (double checkpoint : res.record_times) {
      auto stats = integrate_ode(rhs, current, checkpoint, x, opts.solver);
      res.total_steps += stats.steps;
      res.min_step = std::min(res.min_step, stats.h_min);
      if (!stats.ok) {
        res.sample_ok[i] = 0;
        res.sample_error[i] = stats.error;
        ++res.failed;
        break;
      }
      traj.insert(traj.end(), x.begin(), x.end());
      current = checkpoint;
    }
    if (!res.sample_ok[i]) {
      traj.assign(res.record_times.size() * x0.dim, std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    if (opts.want_density) {
      std::vector<double> z(row.begin(), row.end());
      z.push_back(0.0);
      auto stats = integrate_ode(density_rhs(field), t, s, z, opts.solver);
      if (!stats.ok) {
        res.sample_ok[i] = 0;
        res.sample_error[i] = stats.error;
        ++res.failed;
        continue;
      }
      res.log_density[i] = -z.back();
    }
  }
  return res;
}

std::vector<double> density_along_flow(const VectorFieldSpec& field, double s, double t,
                                       const Batch& points, DensityMode mode,
                                       const SolverOptions& solver) {
  if (points.dim != field.dim()) throw DimensionMismatchError("density_along_flow: dim mismatch");
  std::vector<double> out(points.n, 0.0);
  if (mode == DensityMode::AnalyticChangeOfVariables) {
    if (!field.has_analytic_density())
      throw std::domain_error("density_along_flow: no analytic change of variables for this field");
    for (long i = 0; i < points.n; ++i) out[i] = field.analytic_log_density(s, t, points.row(i));
    return out;
  }
  if (!field.divergence_available())
    throw std::domain_error("density_along_flow: divergence not available");
  OdeRhs rhs = density_rhs(field);
  for (long i = 0; i < points.n; ++i) {
    auto row = points.row(i);
    std::vector<double> z(row.begin(), row.end());
    z.push_back(0.0);
    auto stats = integrate_ode(rhs, t, s, z, solver);
    if (!stats.ok) throw std::runtime_error("density_along_flow: solver failed: " + stats.error);
    out[i] = -z.back();
  }
  return out;
}

double flow_law_residual(const VectorFieldSpec& field, double r, double s, double t,
                         const Batch& batch, const SolverOptions& solver,
                         std::span<const double> weight_profile) {
  OdeRhs rhs = field_rhs(field);
  double worst = 0.0;
  for (long i = 0; i < batch.n; ++i) {
    auto row = batch.row(i);
    std::vector<double> direct(row.begin(), row.end());
    integrate_ode(rhs, r, t, direct, solver);
    std::vector<double> staged(row.begin(), row.end());
    integrate_ode(rhs, r, s, staged, solver);
    integrate_ode(rhs, s, t, staged, solver);
    worst = std::max(worst, norm_deviation(direct, staged, weight_profile));
  }
  return worst;
}

double group_law_residual(const VectorFieldSpec& field, double s, double t, const Batch& batch,
                          const SolverOptions& solver) {
  if (!field.autonomous()) throw std::invalid_argument("group_law_residual: field must be autonomous");
  OdeRhs rhs = field_rhs(field);
  double worst = 0.0;
  for (long i = 0; i < batch.n; ++i) {
    auto row = batch.row(i);
    std::vector<double> direct(row.begin(), row.end());
    integrate_ode(rhs, 0.0, s + t, direct, solver);
    std::vector<double> staged(row.begin(), row.end());
    integrate_ode(rhs, 0.0, t, staged, solver);
    integrate_ode(rhs, 0.0, s, staged, solver);
    worst = std::max(worst, norm_deviation(direct, staged, {}));
  }
  return worst;
}

VectorFieldSpec galerkin_truncate(const VectorFieldSpec& field, int m) {
  if (field.kind() != VectorFieldSpec::Kind::Chaos)
    throw std::invalid_argument("galerkin_truncate: chaos fields only");
  std::vector<ChaosField> projected;
  projected.reserve(field.node_fields().size());
  for (auto& f : field.node_fields()) projected.push_back(conditional_project(f, m));
  if (field.nodes().size() == 1)
    return VectorFieldSpec::chaos(projected.front(), field.t_begin(), field.t_end());
  return VectorFieldSpec::chaos_nodes(field.nodes(), std::move(projected));
}

std::vector<GalerkinRow> galerkin_convergence(const VectorFieldSpec& field,
                                              const std::vector<int>& ms, double s, double t,
                                              const Batch& batch, const SolverOptions& solver,
                                              double p, int checkpoints) {
  if (field.kind() != VectorFieldSpec::Kind::Chaos)
    throw std::invalid_argument("galerkin_convergence: chaos fields only");
  const auto& space = field.space();
  std::span<const double> weights(space.weights);

  std::vector<double> record;
  for (int k = 1; k <= checkpoints; ++k) record.push_back(s + (t - s) * double(k) / checkpoints);
  FlowOptions opts;
  opts.solver = solver;
  opts.record_times = record;
  FlowResult full = integrate_flow(field, s, t, batch, opts);

  std::vector<GalerkinRow> rows;
  for (int m : ms) {
    VectorFieldSpec truncated = galerkin_truncate(field, m);
    FlowResult part = integrate_flow(truncated, s, t, batch, opts);
    // E sup over the checkpoint grid of the weighted deviation.
    double mean_sup = 0.0;
    for (long i = 0; i < batch.n; ++i) {
      double sup = 0.0;
      for (std::size_t k = 0; k < record.size(); ++k)
        sup = std::max(sup, norm_deviation(full.state_at(i, k), part.state_at(i, k), weights));
      mean_sup += sup;
    }
    mean_sup /= double(batch.n);

    // (int E |v^(m) - v|^p dr)^(1/p) by trapezoid over the same grid.
    std::vector<double> gap_at(record.size() + 1, 0.0);
    std::vector<double> times(record.size() + 1);
    times[0] = s;
    for (std::size_t k = 0; k < record.size(); ++k) times[k + 1] = record[k];
    std::vector<double> va(field.dim()), vb(field.dim());
    for (std::size_t k = 0; k < times.size(); ++k) {
      double acc = 0.0;
      for (long i = 0; i < batch.n; ++i) {
        auto x = batch.row(i);
        field.value(times[k], x, va);
        truncated.value(times[k], x, vb);
        acc += std::pow(norm_deviation(va, vb, weights), p);
      }
      gap_at[k] = acc / double(batch.n);
    }
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
      integral += 0.5 * (gap_at[k] + gap_at[k + 1]) * (times[k + 1] - times[k]);
    double gap = std::pow(std::abs(integral), 1.0 / p);

    GalerkinRow row;
    row.m = m;
    row.flow_deviation = mean_sup;
    row.field_gap = gap;
    row.ratio = gap > 0.0 ? mean_sup / gap : 0.0;
    rows.push_back(row);
  }
  return rows;
}

namespace {

// Composite Simpson weights over [a, b] with an odd number of nodes.
void simpson_grid(double a, double b, int nodes, std::vector<double>& ts, std::vector<double>& ws) {
  if (nodes < 3 || nodes % 2 == 0) nodes = std::max(3, nodes | 1);
  ts.resize(nodes);
  ws.resize(nodes);
  double h = (b - a) / double(nodes - 1);
  for (int i = 0; i < nodes; ++i) {
    ts[i] = a + h * i;
    double w = (i == 0 || i == nodes - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    ws[i] = w * h / 3.0;
  }
}

}  // namespace

MomentDiagnostics exp_moment_diagnostics(const VectorFieldSpec& u_part,
                                         const VectorFieldSpec* b_part, double theta, long n_samples,
                                         std::uint64_t seed, int time_nodes,
                                         std::span<const double> weight_profile) {
  const int dim = u_part.dim();
  const double a = u_part.t_begin(), b = u_part.t_end();
  std::vector<double> ts, ws;
  simpson_grid(a, b, time_nodes, ts, ws);

  Batch batch = sample_gaussian(dim, n_samples, seed);
  std::vector<double> vals_h(n_samples, 0.0);
  Mat jac(dim);
  for (long i = 0; i < n_samples; ++i) {
    auto x = batch.row(i);
    double integral = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      u_part.jacobian(ts[k], x, jac);
      double g = operator_norm(jac) + std::abs(u_part.divergence_value(ts[k], x));
      integral += ws[k] * std::exp(theta * g);
    }
    vals_h[i] = integral;
  }
  MomentDiagnostics out;
  out.theta = theta;
  out.gamma_h = mean_and_se(vals_h, seed);

  if (b_part == nullptr) {
    out.gamma_w = Estimate{b - a, 0.0, n_samples, seed};
  } else {
    std::vector<double> q(weight_profile.begin(), weight_profile.end());
    if (q.empty()) q.assign(dim, 1.0);
    Estimate best{};
    std::vector<double> vals_w(n_samples, 0.0);
    Mat proj(dim);
    for (int m = 1; m <= dim; ++m) {
      for (long i = 0; i < n_samples; ++i) {
        auto x = batch.row(i);
        double integral = 0.0;
        for (std::size_t k = 0; k < ts.size(); ++k) {
          b_part->jacobian(ts[k], x, jac);
          for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) proj(r, c) = (r < m && c < m) ? jac(r, c) : 0.0;
          integral += ws[k] * std::exp(theta * weighted_operator_norm(proj, q));
        }
        vals_w[i] = integral;
      }
      Estimate e = mean_and_se(vals_w, seed);
      if (m == 1 || e.mean > best.mean) best = e;
    }
    out.gamma_w = best;
  }

  // Stability probe: the first half of the batch should agree with the whole.
  if (n_samples >= 4) {
    Estimate half = mean_and_se(std::span<const double>(vals_h.data(), n_samples / 2), seed);
    double gap = std::abs(half.mean - out.gamma_h.mean);
    double se = std::sqrt(half.std_error * half.std_error +
                          out.gamma_h.std_error * out.gamma_h.std_error);
    out.stable = gap <= 4.0 * se + 1e-12;
  }
  return out;
}

DensityLpCheck density_lp_check(const VectorFieldSpec& field, double s, double t, double p,
                                double theta, long n_samples, std::uint64_t seed,
                                const SolverOptions& solver) {
  if (!(p > 1.0)) throw std::invalid_argument("density_lp_check: need p > 1");
  if (!(std::abs(t - s) < theta / (2.0 * p)))
    throw std::invalid_argument("density_lp_check: window |t-s| < theta/(2p) violated");
  MomentDiagnostics diag = exp_moment_diagnostics(field, nullptr, theta, n_samples, seed);

  Batch batch = sample_gaussian(field.dim(), n_samples, substream_seed(seed, 1));
  std::vector<double> log_lambda =
      density_along_flow(field, s, t, batch, DensityMode::DivergenceIntegral, solver);
  std::vector<double> powed(log_lambda.size());
  for (std::size_t i = 0; i < log_lambda.size(); ++i) powed[i] = std::exp(p * log_lambda[i]);

  DensityLpCheck out;
  out.moment = mean_and_se(powed, seed);
  out.gamma_h = diag.gamma_h.mean;
  out.gamma_w = diag.gamma_w.mean;
  out.bound = std::exp(1.0 / p) *
              (1.0 + (2.0 * p - 2.0) / theta * std::sqrt(out.gamma_h * out.gamma_w));
  out.pass = out.moment.mean <= out.bound + 4.0 * out.moment.std_error;
  return out;
}

WeightedPoints weighted_points_mc(int dim, long n, std::uint64_t seed) {
  WeightedPoints wp;
  wp.points = sample_gaussian(dim, n, seed);
  wp.weights.assign(n, 1.0 / double(n));
  return wp;
}

WeightedPoints weighted_points_gh(int dim, int nodes_per_dim) {
  auto rule = gauss_hermite(nodes_per_dim);
  long total = 1;
  for (int d = 0; d < dim; ++d) total *= nodes_per_dim;
  WeightedPoints wp;
  wp.points.dim = dim;
  wp.points.n = total;
  wp.points.data.resize(std::size_t(total) * dim);
  wp.weights.resize(total);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    double w = 1.0;
    for (int d = 0; d < dim; ++d) {
      int k = int(rem % nodes_per_dim);
      rem /= nodes_per_dim;
      wp.points.data[std::size_t(idx) * dim + d] = rule.nodes[k];
      w *= rule.weights[k];
    }
    wp.weights[idx] = w;
  }
  return wp;
}

DerivativeCheck density_derivative_check(const VectorFieldSpec& field, double s,
                                         const std::vector<double>& hs, const ChaosPoly& phi,
                                         const WeightedPoints& rule, const SolverOptions& solver) {
  DerivativeCheck out;
  const long n = rule.points.n;
  std::vector<double> phi_vals(n);
  for (long i = 0; i < n; ++i) phi_vals[i] = evaluate(phi, rule.points.row(i));

  out.target = 0.0;
  for (long i = 0; i < n; ++i)
    out.target += rule.weights[i] * phi_vals[i] * field.divergence_value(s, rule.points.row(i));

  for (double h : hs) {
    std::vector<double> log_lambda =
        density_along_flow(field, s, s + h, rule.points, DensityMode::DivergenceIntegral, solver);
    double pairing = 0.0;
    for (long i = 0; i < n; ++i)
      pairing += rule.weights[i] * phi_vals[i] * (std::exp(log_lambda[i]) - 1.0) / h;
    DerivativeCheck::Row row;
    row.h = h;
    row.pairing = pairing;
    row.error = std::abs(pairing - out.target);
    out.rows.push_back(row);
  }

  // Log-log slope over the rows with errors above the numerical floor.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (auto& r : out.rows) {
    if (r.error <= 1e-13) continue;
    double lx = std::log(r.h), ly = std::log(r.error);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  out.rate = cnt >= 2 ? (double(cnt) * sxy - sx * sy) / (double(cnt) * sxx - sx * sx) : 0.0;

  // Linear-in-h extrapolation from the two smallest steps.
  if (out.rows.size() >= 2) {
    auto sorted = out.rows;
    std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.h < b.h; });
    double h1 = sorted[0].h, p1 = sorted[0].pairing;
    double h2 = sorted[1].h, p2 = sorted[1].pairing;
    out.extrapolated = p1 - h1 * (p2 - p1) / (h2 - h1);
  } else if (!out.rows.empty()) {
    out.extrapolated = out.rows.front().pairing;
  }
  return out;
}

AdaptednessReport adaptedness_check(const VectorFieldSpec& field, double s, double t,
                                    const std::vector<double>& theta_grid, const Batch& probes,
                                    double tol) {
  AdaptednessReport rep;
  const int dim = field.dim();

  // Field-level check: lower-triangular chaos support.
  rep.field_adapted = true;
  if (field.kind() == VectorFieldSpec::Kind::Chaos) {
    for (auto& f : field.node_fields()) {
      for (int i = 0; i < dim && rep.field_adapted; ++i) {
        for (auto& [alpha, c] : f.component(i).coeffs()) {
          if (!alpha.supported_within(i + 1)) {
            rep.field_adapted = false;
            rep.offending_component = i;
            break;
          }
        }
      }
    }
  } else {
    // Registry: tanh and zero are lower-triangular, the rotations are not.
    rep.field_adapted = field.name() == "zero" || field.name() == "tanh";
    if (!rep.field_adapted) rep.offending_component = 0;
  }

  // Flow sensitivity probe with fixed-step RK4 so identical subsystems produce
  // identical arithmetic.
  SolverOptions solver;
  solver.method = SolverOptions::Method::Rk4;
  solver.rk4_dt = 1e-3;
  OdeRhs rhs = field_rhs(field);
  for (double theta : theta_grid) {
    AdaptednessReport::ThetaRow row;
    row.theta = theta;
    row.m = std::min(dim, int(std::ceil(theta * dim)));
    double worst = 0.0;
    for (long i = 0; i < probes.n; ++i) {
      auto x0 = probes.row(i);
      std::vector<double> base(x0.begin(), x0.end());
      integrate_ode(rhs, s, t, base, solver);
      for (int j = row.m; j < dim; ++j) {
        std::vector<double> pert(x0.begin(), x0.end());
        pert[j] += 1.0;
        integrate_ode(rhs, s, t, pert, solver);
        for (int c = 0; c < row.m; ++c) worst = std::max(worst, std::abs(pert[c] - base[c]));
      }
    }
    row.max_influence = worst;
    row.pass = worst <= tol;
    rep.rows.push_back(row);
    if (!row.pass) rep.flow_pass = false;
  }
  return rep;
}

namespace {

// Chaos coefficients of x -> g(R x) by tensor Gauss-Hermite projection,
// exact for polynomial g (an orthogonal R preserves total degree).
ChaosPoly pullback_linear(const ChaosPoly& g, const Mat& r) {
  const auto& space = g.space();
  const int dim = space.dim;
  const int deg = g.degree();
  WeightedPoints wp = weighted_points_gh(dim, space.degree_cap + 1);
  // Enumerate all multi-indices with |beta| <= deg.
  std::vector<MultiIndex> betas;
  std::vector<int> stack(dim, 0);
  std::function<void(int, int)> enumerate = [&](int pos, int remaining) {
    if (pos == dim) {
      betas.push_back(MultiIndex::from_dense(stack));
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      stack[pos] = e;
      enumerate(pos + 1, remaining - e);
    }
    stack[pos] = 0;
  };
  enumerate(0, deg);

  ChaosPoly out(space);
  std::vector<double> rx(dim);
  std::vector<double> gvals(wp.points.n);
  for (long i = 0; i < wp.points.n; ++i) {
    auto x = wp.points.row(i);
    for (int a = 0; a < dim; ++a) {
      rx[a] = 0.0;
      for (int b = 0; b < dim; ++b) rx[a] += r(a, b) * x[b];
    }
    gvals[i] = evaluate(g, rx);
  }
  for (auto& beta : betas) {
    double acc = 0.0;
    for (long i = 0; i < wp.points.n; ++i) {
      auto x = wp.points.row(i);
      double term = gvals[i];
      for (auto& [d, e] : beta.terms()) term *= hermite_value(e, x[d]);
      acc += wp.weights[i] * term;
    }
    if (std::abs(acc) > 1e-13) out.set(beta, acc);
  }
  return out;
}

}  // namespace

std::vector<TransportPdeRow> transport_pde_residual(const ChaosMatrix& a, const ChaosPoly& f0,
                                                    const std::vector<double>& t_grid,
                                                    const Batch& batch,
                                                    const SolverOptions& solver) {
  require_same_space(a.space(), f0.space(), "transport_pde_residual");
  const auto& space = a.space();
  const int dim = space.dim;

  // Constant antisymmetric A only for the exact pullback route.
  Mat m(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const ChaosPoly& e = a.entry(i, j);
      if (e.degree() > 0)
        throw std::invalid_argument("transport_pde_residual: matrix entries must be constant");
      m(i, j) = expectation(e);
    }
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (std::abs(m(i, j) + m(j, i)) > 1e-12)
        throw std::invalid_argument("transport_pde_residual: matrix must be antisymmetric");

  // B = op_divergence(A^T); for constant A this is the linear field x -> A^T x.
  ChaosField b_field = op_divergence(matrix_transpose(a), Overflow::Error);
  Mat mt = mat_transpose(m);

  // Numeric flow of B for the pathwise route.
  VectorFieldSpec b_spec = VectorFieldSpec::chaos(b_field, t_grid.front(), t_grid.back());
  OdeRhs rhs = field_rhs(b_spec);

  std::vector<TransportPdeRow> rows;
  const double fd_h = 1e-4;
  for (double t : t_grid) {
    Mat rot(dim);
    {
      Mat scaled(dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) scaled(i, j) = t * mt(i, j);
      rot = mat_exp(scaled);
    }
    ChaosPoly f_t = pullback_linear(f0, rot);

    // df/dt by the flow-map derivative: d/dt f0(Rx) = <grad f0 (Rx), M^T R x>.
    ChaosPoly df_dt(space);
    {
      ChaosField grad_f0 = gradient(f0);
      WeightedPoints wp = weighted_points_gh(dim, space.degree_cap + 1);
      std::vector<MultiIndex> betas;
      std::vector<int> stack(dim, 0);
      std::function<void(int, int)> enumerate = [&](int pos, int remaining) {
        if (pos == dim) {
          betas.push_back(MultiIndex::from_dense(stack));
          return;
        }
        for (int e = 0; e <= remaining; ++e) {
          stack[pos] = e;
          enumerate(pos + 1, remaining - e);
        }
        stack[pos] = 0;
      };
      enumerate(0, f0.degree());
      std::vector<double> rx(dim), drx(dim), gvals(wp.points.n);
      for (long i = 0; i < wp.points.n; ++i) {
        auto x = wp.points.row(i);
        for (int r = 0; r < dim; ++r) {
          rx[r] = 0.0;
          for (int c = 0; c < dim; ++c) rx[r] += rot(r, c) * x[c];
        }
        // d/dt (e^{tM^T} x) = M^T e^{tM^T} x
        for (int r = 0; r < dim; ++r) {
          drx[r] = 0.0;
          for (int c = 0; c < dim; ++c) drx[r] += mt(r, c) * rx[c];
        }
        double acc = 0.0;
        for (int r = 0; r < dim; ++r) acc += evaluate(grad_f0.component(r), rx) * drx[r];
        gvals[i] = acc;
      }
      for (auto& beta : betas) {
        double acc = 0.0;
        for (long i = 0; i < wp.points.n; ++i) {
          auto x = wp.points.row(i);
          double term = gvals[i];
          for (auto& [d, e] : beta.terms()) term *= hermite_value(e, x[d]);
          acc += wp.weights[i] * term;
        }
        if (std::abs(acc) > 1e-13) df_dt.set(beta, acc);
      }
    }

    ChaosField grad_f = gradient(f_t);
    ChaosPoly rhs_poly = divergence(matrix_apply(a, grad_f, Overflow::Error), Overflow::Error);
    ChaosPoly diff = df_dt - rhs_poly;

    TransportPdeRow row;
    row.t = t;
    row.residual = std::sqrt(diff.l2_norm_sq());
    row.identity_gap = std::sqrt((rhs_poly - field_pair(grad_f, b_field, Overflow::Error)).l2_norm_sq());

    // Pathwise route on the batch: numeric-flow difference quotient vs the
    // chaos right-hand side.
    double acc = 0.0;
    for (long i = 0; i < batch.n; ++i) {
      auto x0 = batch.row(i);
      std::vector<double> xp(x0.begin(), x0.end()), xm(x0.begin(), x0.end());
      integrate_ode(rhs, 0.0, t + fd_h, xp, solver);
      integrate_ode(rhs, 0.0, t - fd_h, xm, solver);
      double quotient = (evaluate(f0, xp) - evaluate(f0, xm)) / (2.0 * fd_h);
      double d = quotient - evaluate(rhs_poly, x0);
      acc += d * d;
    }
    row.pathwise_residual = std::sqrt(acc / double(std::max<long>(1, batch.n)));
    rows.push_back(row);
  }
  return rows;
}

std::pair<Estimate, Estimate> pushforward_pair(
    const std::function<double(std::span<const double>)>& f, const FlowResult& flow) {
  if (flow.log_density.empty())
    throw std::invalid_argument("pushforward_pair: flow result has no densities");
  std::vector<double> lhs, rhs;
  lhs.reserve(flow.start.n);
  rhs.reserve(flow.start.n);
  for (long i = 0; i < flow.start.n; ++i) {
    if (!flow.sample_ok[i]) continue;
    lhs.push_back(f(flow.endpoint(i)));
    rhs.push_back(f(flow.start.row(i)) * std::exp(flow.log_density[i]));
  }
  return {mean_and_se(lhs), mean_and_se(rhs)};
}

std::vector<KsResult> measure_preservation_ks(const FlowResult& flow, std::uint64_t fresh_seed,
                                              double alpha) {
  const int dim = flow.start.dim;
  Batch fresh = sample_gaussian(dim, flow.start.n, fresh_seed);
  std::vector<KsResult> out;
  for (int c = 0; c < dim; ++c) {
    std::vector<double> a, b;
    a.reserve(flow.start.n);
    b.reserve(flow.start.n);
    for (long i = 0; i < flow.start.n; ++i) {
      if (!flow.sample_ok[i]) continue;
      a.push_back(flow.endpoint(i)[c]);
      b.push_back(fresh.row(i)[c]);
    }
    out.push_back(two_sample_ks(std::move(a), std::move(b), alpha));
  }
  return out;
}

}  // namespace chaosflow
