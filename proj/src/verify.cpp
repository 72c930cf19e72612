#include "chaosflow/verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "chaosflow/flow.hpp"
#include "chaosflow/hermite.hpp"
#include "chaosflow/hodge.hpp"
#include "chaosflow/random_gen.hpp"

namespace chaosflow {

using nlohmann::json;

json Report::to_json() const {
  json j;
  j["suite"] = suite;
  j["config"] = config;
  json arr = json::array();
  for (auto& c : checks) {
    json cj;
    cj["name"] = c.name;
    cj["mode"] = c.mode;
    cj["value"] = c.value;
    cj["tolerance"] = c.tolerance;
    cj["pass"] = c.pass;
    if (!c.note.empty()) cj["note"] = c.note;
    arr.push_back(std::move(cj));
  }
  j["checks"] = std::move(arr);
  j["pass"] = all_pass();
  return j;
}

double resolvent_weight_quadrature(double beta, int k) {
  // t = s^2 removes the endpoint singularity for beta = 1/2:
  //   I = 2/Gamma(beta) * int_0^inf s^(2 beta - 1) exp(-(1+k) s^2) ds.
  const double rate = 1.0 + double(k);
  const double upper = std::sqrt(64.0 / rate);
  const int n = 4001;
  const double h = upper / double(n - 1);
  auto f = [&](double s) { return std::pow(s, 2.0 * beta - 1.0) * std::exp(-rate * s * s); };
  double acc = f(0.0) + f(upper);
  for (int i = 1; i < n - 1; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(h * double(i));
  return 2.0 * (acc * h / 3.0) / std::tgamma(beta);
}

namespace {

CheckResult exact_check(const std::string& name, double value, double tol, std::string note = {}) {
  return CheckResult{name, "exact", value, tol, value <= tol, std::move(note)};
}

CheckResult mc_check(const std::string& name, double zscore, std::string note = {}) {
  return CheckResult{name, "mc", zscore, 4.0, zscore <= 4.0, std::move(note)};
}

double max_coeff_diff(const ChaosPoly& a, const ChaosPoly& b) { return (a - b).max_abs_coeff(); }

double max_coeff_diff(const ChaosField& a, const ChaosField& b) { return (a - b).max_abs_coeff(); }

double max_coeff_diff(const ChaosMatrix& a, const ChaosMatrix& b) { return (a - b).max_abs_coeff(); }

// E<v, grad(phi)> by coefficient pairing (no Hermite products involved).
double pairing_expectation(const ChaosField& v, const ChaosField& w) {
  double acc = 0.0;
  for (int i = 0; i < v.dim(); ++i) acc += l2_inner(v.component(i), w.component(i));
  return acc;
}

// ---------------------------------------------------------------- duality --

std::vector<CheckResult> suite_duality(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  GaussianSpace space(opts.dim, opts.cap);
  Rng rng(substream_seed(opts.seed, 1));

  double worst_duality = 0.0, worst_mean = 0.0;
  for (int c = 0; c < opts.cases; ++c) {
    ChaosField v = random_field(space, opts.cap - 1, 4, rng);
    ChaosPoly phi = random_poly(space, opts.cap, 6, rng);
    ChaosPoly dv = divergence(v, Overflow::Error);
    double lhs = pairing_expectation(v, gradient(phi));
    double rhs = l2_inner(phi, dv);
    worst_duality = std::max(worst_duality, std::abs(lhs - rhs));
    worst_mean = std::max(worst_mean, std::abs(expectation(dv)));
  }
  out.push_back(exact_check("duality_gradient_divergence", worst_duality, 1e-10,
                            std::to_string(opts.cases) + " seeded pairs"));
  out.push_back(exact_check("divergence_zero_mean", worst_mean, 0.0));

  // Orthonormality under Monte Carlo in a small space.
  {
    GaussianSpace s2(2, 4);
    std::vector<MultiIndex> basis;
    for (int d0 = 0; d0 <= 4; ++d0)
      for (int d1 = 0; d0 + d1 <= 4; ++d1) {
        std::vector<int> dense{d0, d1};
        basis.push_back(MultiIndex::from_dense(dense));
      }
    long n = std::min<long>(opts.n_mc, 100000);
    Batch batch = sample_gaussian(2, n, substream_seed(opts.seed, 2));
    std::vector<std::vector<double>> vals(basis.size(), std::vector<double>(n));
    std::vector<double> h0(5), h1(5);
    for (long i = 0; i < n; ++i) {
      auto x = batch.row(i);
      hermite_values(4, x[0], h0);
      hermite_values(4, x[1], h1);
      for (std::size_t b = 0; b < basis.size(); ++b) {
        double t = 1.0;
        for (auto& [d, e] : basis[b].terms()) t *= (d == 0 ? h0[e] : h1[e]);
        vals[b][i] = t;
      }
    }
    double worst_z = 0.0;
    std::vector<double> prod(n);
    for (std::size_t a = 0; a < basis.size(); ++a) {
      for (std::size_t b = a; b < basis.size(); ++b) {
        for (long i = 0; i < n; ++i) prod[i] = vals[a][i] * vals[b][i];
        Estimate e = mean_and_se(prod);
        double target = a == b ? 1.0 : 0.0;
        if (e.std_error > 0.0) worst_z = std::max(worst_z, std::abs(e.mean - target) / e.std_error);
      }
    }
    out.push_back(mc_check("orthonormality", worst_z, "all pairs, degree <= 4, dim 2"));
  }

  // Monte-Carlo mean of evaluate() against the stored expectation.
  {
    double worst_z = 0.0;
    Batch batch = sample_gaussian(opts.dim, std::min<long>(opts.n_mc, 100000),
                                  substream_seed(opts.seed, 3));
    for (int c = 0; c < 10; ++c) {
      ChaosPoly p = random_poly(space, opts.cap, 6, rng);
      auto rep = estimate([&](std::span<const double> x) { return evaluate(p, x); }, batch);
      if (rep.est.std_error > 0.0)
        worst_z = std::max(worst_z, std::abs(rep.est.mean - expectation(p)) / rep.est.std_error);
    }
    out.push_back(mc_check("evaluate_expectation_consistency", worst_z));
  }
  return out;
}

// ----------------------------------------------------------- product rule --

std::vector<CheckResult> suite_product_rule(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  GaussianSpace space(opts.dim, opts.cap);
  Rng rng(substream_seed(opts.seed, 4));

  // One-dimensional linearization against Gauss-Hermite quadrature.
  {
    GaussianSpace s1(1, opts.cap);
    double worst = 0.0;
    for (int m = 0; m <= opts.cap; ++m) {
      for (int n = 0; m + n <= opts.cap; ++n) {
        std::vector<int> am{m}, an{n};
        ChaosPoly prod = multiply(ChaosPoly::hermite(s1, MultiIndex::from_dense(am)),
                                  ChaosPoly::hermite(s1, MultiIndex::from_dense(an)));
        int nodes = (m + n) / 2 + 2;
        for (int k = 0; k <= opts.cap; ++k) {
          double via_quad = gh_expect_1d(std::max(nodes, k / 2 + 2), [&](double x) {
            return hermite_value(m, x) * hermite_value(n, x) * hermite_value(k, x);
          });
          std::vector<int> ak{k};
          double stored = prod.coeff(MultiIndex::from_dense(ak));
          worst = std::max(worst, std::abs(stored - via_quad));
        }
      }
    }
    out.push_back(exact_check("linearization_vs_quadrature", worst, 1e-10,
                              "all 1-d degree pairs within cap"));
  }

  // delta(alpha v) = alpha delta v - <v, grad alpha>.
  {
    double worst = 0.0;
    for (int c = 0; c < opts.cases; ++c) {
      ChaosPoly alpha = random_poly(space, 2, 4, rng);
      ChaosField v = random_field(space, opts.cap - 3, 3, rng);
      ChaosField av(space);
      for (int i = 0; i < space.dim; ++i)
        av.set_component(i, multiply(alpha, v.component(i), Overflow::Error));
      ChaosPoly lhs = divergence(av, Overflow::Error);
      ChaosPoly rhs = multiply(alpha, divergence(v, Overflow::Error), Overflow::Error) -
                      field_pair(v, gradient(alpha), Overflow::Error);
      worst = std::max(worst, max_coeff_diff(lhs, rhs));
    }
    out.push_back(exact_check("divergence_product_rule", worst, 1e-10,
                              std::to_string(opts.cases) + " seeded cases"));
  }

  // grad(delta G) = G + op_divergence((grad G)^T), component-wise.
  {
    double worst = 0.0;
    for (int c = 0; c < opts.cases; ++c) {
      ChaosField g = random_field(space, opts.cap - 1, 4, rng);
      ChaosField lhs = gradient(divergence(g, Overflow::Error));
      ChaosField rhs = g + op_divergence(matrix_transpose(gradient_matrix(g)), Overflow::Error);
      worst = std::max(worst, max_coeff_diff(lhs, rhs));
    }
    out.push_back(exact_check("gradient_of_divergence_identity", worst, 1e-10,
                              std::to_string(opts.cases) + " seeded cases"));
  }
  return out;
}

// --------------------------------------------------------------- spectral --

std::vector<CheckResult> suite_spectral(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  GaussianSpace space(opts.dim, opts.cap);
  Rng rng(substream_seed(opts.seed, 5));

  {
    double worst = 0.0;
    for (int c = 0; c < opts.cases; ++c) {
      ChaosPoly phi = random_poly(space, opts.cap - 1, 6, rng);
      ChaosPoly lhs = spectral_apply(phi, SpectralFunction::number_op());
      ChaosPoly rhs = divergence(gradient(phi), Overflow::Error);
      worst = std::max(worst, max_coeff_diff(lhs, rhs));
    }
    out.push_back(exact_check("number_op_equals_div_grad", worst, 1e-12));
  }

  {
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
      ChaosPoly phi = random_poly(space, opts.cap, 6, rng);
      double t = 0.1 + 0.4 * rng.uniform();
      ChaosField lhs = gradient(spectral_apply(phi, SpectralFunction::ou_semigroup(t)));
      ChaosField rhs = std::exp(-t) * spectral_apply(gradient(phi), SpectralFunction::ou_semigroup(t));
      worst = std::max(worst, max_coeff_diff(lhs, rhs));
    }
    out.push_back(exact_check("ou_gradient_commutation", worst, 1e-12,
                              "grad T_t = e^{-t} T_t grad"));
  }

  {
    double worst = 0.0;
    for (double beta : {0.5, 1.0, 2.0}) {
      for (int c = 0; c < 20; ++c) {
        ChaosPoly phi = random_poly(space, opts.cap, 6, rng, 1.0, true);
        ChaosField lhs = gradient(spectral_apply(phi, SpectralFunction::resolvent_power(beta)));
        ChaosField grad = gradient(phi);
        ChaosField rhs(space);
        for (int i = 0; i < space.dim; ++i) {
          ChaosPoly comp(space);
          for (auto& [alpha, coef] : grad.component(i).coeffs())
            comp.set(alpha, std::pow(2.0 + double(alpha.degree()), -beta) * coef);
          rhs.set_component(i, std::move(comp));
        }
        worst = std::max(worst, max_coeff_diff(lhs, rhs));
      }
    }
    out.push_back(exact_check("resolvent_gradient_shift", worst, 1e-12,
                              "gradient shifts the resolvent eigenvalue by one degree"));
  }

  {
    double worst = 0.0;
    for (double beta : {0.5, 1.0, 2.0})
      for (int k = 0; k <= 6; ++k)
        worst = std::max(worst, std::abs(resolvent_weight_quadrature(beta, k) -
                                         std::pow(1.0 + double(k), -beta)));
    out.push_back(exact_check("resolvent_weight_quadrature", worst, 1e-8,
                              "k <= 6, beta in {0.5, 1, 2}"));
  }

  {
    GaussianSpace s2(2, 4);
    double worst_z = 0.0;
    for (int c = 0; c < 50; ++c) {
      ChaosPoly p = random_poly(s2, 4, 5, rng);
      double t = 0.2 + 1.0 * rng.uniform();
      Batch pt = sample_gaussian(2, 1, substream_seed(opts.seed, 600 + c));
      ChaosPoly tp = spectral_apply(p, SpectralFunction::ou_semigroup(t));
      double spectral_value = evaluate(tp, pt.row(0));
      auto est = mehler_estimate(p, t, pt, 40000, substream_seed(opts.seed, 700 + c));
      if (est[0].std_error > 0.0)
        worst_z = std::max(worst_z, std::abs(est[0].mean - spectral_value) / est[0].std_error);
    }
    out.push_back(mc_check("ou_mehler_oracle", worst_z, "50 cases, antithetic pairs"));
  }

  {
    double worst = 0.0;
    for (int c = 0; c < opts.cases; ++c) {
      ChaosField v = random_field(space, opts.cap - 1, 4, rng);
      int m = 1 + (c % space.dim);
      ChaosPoly lhs = conditional_project(divergence(v, Overflow::Error), m);
      ChaosPoly rhs = divergence(conditional_project(v, m), Overflow::Error);
      worst = std::max(worst, max_coeff_diff(lhs, rhs));
    }
    out.push_back(exact_check("projection_divergence_commute", worst, 0.0));
  }

  {
    bool threw = false;
    try {
      spectral_apply(ChaosPoly::constant(space, 1.0), SpectralFunction::inverse_l());
    } catch (const std::domain_error&) {
      threw = true;
    }
    CheckResult c;
    c.name = "inverse_number_op_domain";
    c.mode = "exact";
    c.value = threw ? 0.0 : 1.0;
    c.tolerance = 0.0;
    c.pass = threw;
    c.note = "nonzero mean must be rejected";
    out.push_back(c);
  }
  return out;
}

// --------------------------------------------------------------- operator --

std::vector<CheckResult> suite_operator(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  GaussianSpace space(opts.dim, opts.cap);
  Rng rng(substream_seed(opts.seed, 6));

  {
    double worst = 0.0;
    for (int c = 0; c < opts.cases / 2; ++c) {
      ChaosMatrix k = random_matrix(space, opts.cap - 1, 2, rng);
      ChaosField dd = op_divergence(k, Overflow::Error);
      for (int i = 0; i < space.dim; ++i) {
        std::vector<double> l(space.dim, 0.0);
        l[i] = 1.0;
        ChaosPoly lhs = divergence(matrix_apply(matrix_transpose(k), l), Overflow::Error);
        worst = std::max(worst, max_coeff_diff(lhs, dd.component(i)));
      }
    }
    out.push_back(exact_check("weak_pairing_identity", worst, 0.0,
                              "delta(K^T e_i) = <e_i, op_divergence K>"));
  }

  {
    double worst = 0.0;
    for (int c = 0; c < opts.cases; ++c) {
      ChaosMatrix k = random_matrix(space, 2, 2, rng);
      ChaosField f = random_field(space, opts.cap - 3, 3, rng);
      ChaosPoly lhs = weakb_combine(k, f, Overflow::Error);
      ChaosPoly rhs = field_pair(f, op_divergence(k, Overflow::Error), Overflow::Error) -
                      matrix_product_trace(matrix_transpose(k), gradient_matrix(f), Overflow::Error);
      worst = std::max(worst, max_coeff_diff(lhs, rhs));
    }
    out.push_back(exact_check("weakb_identity", worst, 1e-10,
                              "delta(K^T F) = <F, ddK> - tr(K^T grad F)"));
  }

  {
    double worst = 0.0;
    for (int c = 0; c < opts.cases; ++c) {
      ChaosPoly alpha = random_poly(space, 2, 4, rng);
      ChaosMatrix a = random_matrix(space, opts.cap - 3, 2, rng);
      ChaosMatrix aa(space);
      for (int i = 0; i < space.dim; ++i)
        for (int j = 0; j < space.dim; ++j)
          aa.set_entry(i, j, multiply(alpha, a.entry(i, j), Overflow::Error));
      ChaosField lhs = op_divergence(aa, Overflow::Error);
      ChaosField add = op_divergence(a, Overflow::Error);
      ChaosField scaled(space);
      for (int i = 0; i < space.dim; ++i)
        scaled.set_component(i, multiply(alpha, add.component(i), Overflow::Error));
      ChaosField rhs = scaled - matrix_apply(a, gradient(alpha), Overflow::Error);
      worst = std::max(worst, max_coeff_diff(lhs, rhs));
    }
    out.push_back(exact_check("scalar_matrix_product_rule", worst, 1e-10,
                              "dd(alpha A) = alpha dd A - A grad alpha"));
  }

  {
    // v tensor y with deterministic y: dd(v (x) y) = delta(v) y.
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
      ChaosField v = random_field(space, opts.cap - 1, 3, rng);
      std::vector<double> y(space.dim);
      for (auto& t : y) t = rng.normal();
      ChaosMatrix k(space);
      for (int i = 0; i < space.dim; ++i)
        for (int j = 0; j < space.dim; ++j) k.set_entry(i, j, y[i] * v.component(j));
      ChaosField lhs = op_divergence(k, Overflow::Error);
      ChaosPoly dv = divergence(v, Overflow::Error);
      ChaosField rhs(space);
      for (int i = 0; i < space.dim; ++i) rhs.set_component(i, y[i] * dv);
      worst = std::max(worst, max_coeff_diff(lhs, rhs));
    }
    out.push_back(exact_check("rank_one_divergence", worst, 1e-12));
  }

  {
    double worst = 0.0;
    Rng rng2(substream_seed(opts.seed, 7));
    for (int c = 0; c < 50; ++c) {
      ChaosMatrix a(space);
      for (int i = 0; i < space.dim; ++i)
        for (int j = i + 1; j < space.dim; ++j) {
          double x = rng2.normal();
          a.set_entry(i, j, ChaosPoly::constant(space, x));
          a.set_entry(j, i, ChaosPoly::constant(space, -x));
        }
      ChaosPoly phi = random_poly(space, opts.cap, 6, rng2);
      double val = pairing_expectation(op_divergence(a, Overflow::Error), gradient(phi));
      worst = std::max(worst, std::abs(val));
    }
    out.push_back(exact_check("antisym_kernel_orthogonality", worst, 1e-12,
                              "E<ddA, grad phi> = 0 for constant antisymmetric A"));
  }

  {
    ChaosMatrix k = random_matrix(space, opts.cap, 3, rng);
    double inv = max_coeff_diff(matrix_transpose(matrix_transpose(k)), k);
    double tr = max_coeff_diff(matrix_trace(matrix_transpose(k)), matrix_trace(k));
    out.push_back(exact_check("transpose_involution", inv, 0.0));
    out.push_back(exact_check("trace_of_transpose", tr, 0.0));
  }

  {
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
      ChaosMatrix k = random_matrix(space, opts.cap - 1, 2, rng);
      int m = 1 + (c % space.dim);
      ChaosField lhs = op_divergence(conditional_project(k, m), Overflow::Error);
      ChaosField rhs = conditional_project(op_divergence(k, Overflow::Error), m);
      worst = std::max(worst, max_coeff_diff(lhs, rhs));
    }
    out.push_back(exact_check("projection_commutes_with_op_divergence", worst, 0.0));
  }

  {
    double worst = 0.0;
    int deg = (opts.cap - 2) / 2;
    for (int c = 0; c < opts.cases; ++c) {
      ChaosField u = random_field(space, deg, 3, rng);
      ChaosField g = random_field(space, deg, 3, rng);
      SecondMomentCheck smc = second_moment_check(u, g, Overflow::Error);
      worst = std::max({worst, std::abs(smc.lhs - smc.rhs_trace), std::abs(smc.lhs - smc.rhs_pairing)});
    }
    out.push_back(exact_check("second_moment_three_routes", worst, 1e-10,
                              std::to_string(opts.cases) + " seeded cases"));
  }
  return out;
}

// ------------------------------------------------------------------ hodge --

std::vector<CheckResult> suite_hodge(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  GaussianSpace space(opts.dim, opts.cap);
  Rng rng(substream_seed(opts.seed, 8));

  {
    double worst_div = 0.0, worst_recon = 0.0, worst_mean = 0.0;
    for (int c = 0; c < 100; ++c) {
      ChaosField v = random_field(space, opts.cap - 1, 4, rng);
      HodgeDecomposition h = hodge_decompose(v, Overflow::Error);
      worst_div = std::max(worst_div, divergence(h.divergence_free, Overflow::Error).max_abs_coeff());
      worst_recon = std::max(worst_recon, max_coeff_diff(h.divergence_free + h.exact, v));
      worst_mean = std::max(worst_mean, std::abs(expectation(h.potential)));
      if (!(h.exact == gradient(h.potential)))
        worst_recon = std::max(worst_recon, 1.0);  // exact part must be the gradient, bitwise
    }
    out.push_back(exact_check("decomposition_divergence_free", worst_div, 1e-12));
    out.push_back(exact_check("decomposition_reconstruction", worst_recon, 1e-10));
    out.push_back(exact_check("potential_zero_mean", worst_mean, 0.0));
  }

  {
    // The planar rotation (x2, -x1) is its own divergence-free part.
    GaussianSpace s2(2, 4);
    ChaosField v(s2);
    v.set_component(0, ChaosPoly::coordinate(s2, 1));
    v.set_component(1, -1.0 * ChaosPoly::coordinate(s2, 0));
    HodgeDecomposition h = hodge_decompose(v, Overflow::Error);
    double worst = std::max({max_coeff_diff(h.divergence_free, v), h.exact.max_abs_coeff(),
                             h.potential.max_abs_coeff()});
    out.push_back(exact_check("rotation_is_divergence_free", worst, 0.0));
  }

  {
    // Identity field: psi = sum (x_i^2 - 1)/2, i.e. coefficient 1/sqrt(2) at 2 e_i.
    ChaosField v = ChaosField::identity(space);
    HodgeDecomposition h = hodge_decompose(v, Overflow::Error);
    ChaosPoly psi_expected(space);
    for (int i = 0; i < space.dim; ++i)
      psi_expected.set(MultiIndex::unit(i).raised(i), 1.0 / std::sqrt(2.0));
    double worst = std::max({max_coeff_diff(h.potential, psi_expected),
                             h.divergence_free.max_abs_coeff(), max_coeff_diff(h.exact, v)});
    out.push_back(exact_check("identity_field_potential", worst, 1e-12));
  }

  {
    double worst = 0.0;
    for (int c = 0; c < 50; ++c) {
      ChaosField v0 = random_divergence_free(space, opts.cap - 1, rng, 0.7);
      ChaosPoly psi = random_poly(space, opts.cap - 1, 4, rng, 0.7, true);
      ChaosField v = v0 + gradient(psi);
      HodgeDecomposition h = hodge_decompose(v, Overflow::Error);
      worst = std::max({worst, max_coeff_diff(h.divergence_free, v0),
                        max_coeff_diff(h.potential, psi)});
    }
    out.push_back(exact_check("decomposition_uniqueness", worst, 1e-12));
  }

  {
    double worst = 0.0;
    for (double beta : {0.5, 1.0, 2.0}) {
      ChaosField v0 = random_divergence_free(space, opts.cap - 1, rng);
      ChaosField filtered = spectral_apply(v0, SpectralFunction::resolvent_power(beta));
      worst = std::max(worst, divergence(filtered, Overflow::Error).max_abs_coeff());
    }
    out.push_back(exact_check("resolvent_preserves_divergence_free", worst, 1e-12));
  }

  {
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
      ChaosMatrix a = random_antisym_matrix(space, opts.cap - 2, 3, rng);
      worst = std::max(worst,
                       divergence(op_divergence(a, Overflow::Error), Overflow::Error).max_abs_coeff());
    }
    out.push_back(exact_check("antisym_divergence_is_divergence_free", worst, 1e-12));
  }

  {
    double worst_rt = 0.0, worst_sym = 0.0, worst_idem = 0.0;
    for (int c = 0; c < 100; ++c) {
      ChaosField v0 = random_divergence_free(space, opts.cap - 1, rng);
      ChaosMatrix a = antisym_representation(v0, Overflow::Error);
      worst_sym = std::max(worst_sym, (a + matrix_transpose(a)).max_abs_coeff());
      worst_rt = std::max(worst_rt, max_coeff_diff(op_divergence(a, Overflow::Error), v0));
      HodgeDecomposition h = hodge_decompose(v0, Overflow::Error);
      worst_idem = std::max({worst_idem, max_coeff_diff(h.divergence_free, v0),
                             h.exact.max_abs_coeff(), h.potential.max_abs_coeff()});
    }
    out.push_back(exact_check("antisym_representation_round_trip", worst_rt, 1e-10));
    out.push_back(exact_check("antisym_representation_skew", worst_sym, 0.0));
    out.push_back(exact_check("decomposition_idempotence", worst_idem, 1e-12));
  }

  {
    // Conformance corner: the rotation maps to [[0,1],[-1,0]] exactly.
    GaussianSpace s2(2, 4);
    ChaosField v0(s2);
    v0.set_component(0, ChaosPoly::coordinate(s2, 1));
    v0.set_component(1, -1.0 * ChaosPoly::coordinate(s2, 0));
    ChaosMatrix a = antisym_representation(v0, Overflow::Error);
    double worst = std::max({std::abs(expectation(a.entry(0, 1)) - 1.0),
                             std::abs(expectation(a.entry(1, 0)) + 1.0),
                             a.entry(0, 0).max_abs_coeff(), a.entry(1, 1).max_abs_coeff()});
    out.push_back(exact_check("rotation_antisym_conformance", worst, 1e-12,
                              "A = [[0,1],[-1,0]] for (x2, -x1)"));
  }
  return out;
}

// ------------------------------------------------------------- flow-basic --

std::vector<CheckResult> suite_flow_basic(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  SolverOptions solver;  // rk45 1e-9/1e-9

  Batch batch2 = sample_gaussian(2, 64, substream_seed(opts.seed, 9));

  {
    VectorFieldSpec rot = VectorFieldSpec::closed_form("rotation", 2, 0.0, 2.0);
    FlowResult res = integrate_flow(rot, 0.0, 0.7, batch2, FlowOptions{solver, false, {}});
    double worst = 0.0;
    for (long i = 0; i < batch2.n; ++i) {
      auto exact = rot.closed_flow(0.0, 0.7, batch2.row(i));
      auto got = res.endpoint(i);
      for (int d = 0; d < 2; ++d) worst = std::max(worst, std::abs(exact[d] - got[d]));
    }
    out.push_back(exact_check("rotation_flow_oracle", worst, 1e-7));
  }

  {
    VectorFieldSpec zero = VectorFieldSpec::closed_form("zero", 3, 0.0, 1.0);
    Batch batch3 = sample_gaussian(3, 16, substream_seed(opts.seed, 10));
    FlowResult res = integrate_flow(zero, 0.0, 1.0, batch3, FlowOptions{solver, false, {}});
    double worst = 0.0;
    for (long i = 0; i < batch3.n; ++i)
      for (int d = 0; d < 3; ++d)
        worst = std::max(worst, std::abs(res.endpoint(i)[d] - batch3.row(i)[d]));
    out.push_back(exact_check("zero_field_identity_map", worst, 0.0));
  }

  {
    VectorFieldSpec tanh_field = VectorFieldSpec::closed_form("tanh", 1, 0.0, 2.0);
    Batch batch1 = sample_gaussian(1, 64, substream_seed(opts.seed, 11));
    FlowResult res = integrate_flow(tanh_field, 0.0, 1.0, batch1, FlowOptions{solver, false, {}});
    double worst = 0.0;
    for (long i = 0; i < batch1.n; ++i) {
      double exact = std::asinh(std::exp(1.0) * std::sinh(batch1.row(i)[0]));
      worst = std::max(worst, std::abs(exact - res.endpoint(i)[0]));
    }
    out.push_back(exact_check("tanh_flow_oracle", worst, 1e-7));
  }

  {
    VectorFieldSpec tanh_field = VectorFieldSpec::closed_form("tanh", 1, 0.0, 2.0);
    Batch batch1 = sample_gaussian(1, 64, substream_seed(opts.seed, 12));
    FlowResult fwd = integrate_flow(tanh_field, 0.0, 1.0, batch1, FlowOptions{solver, false, {}});
    double worst = 0.0;
    for (long i = 0; i < batch1.n; ++i) {
      std::vector<double> x(fwd.endpoint(i).begin(), fwd.endpoint(i).end());
      integrate_ode([&](double t, std::span<const double> s, std::span<double> d) {
                      tanh_field.value(t, s, d);
                    },
                    1.0, 0.0, x, solver);
      worst = std::max(worst, std::abs(x[0] - batch1.row(i)[0]));
    }
    out.push_back(exact_check("flow_reversibility", worst, 1e-7));
  }

  {
    VectorFieldSpec rot = VectorFieldSpec::closed_form("rotation", 2, 0.0, 2.0);
    double res = flow_law_residual(rot, 0.0, std::numbers::pi / 4, std::numbers::pi / 2, batch2, solver);
    out.push_back(exact_check("flow_composition_law", res, 1e-7, "(r,s,t) = (0, pi/4, pi/2)"));
  }

  {
    ChaosField field = galerkin_test_field(opts.seed);
    const GaussianSpace& gspace = field.space();
    Rng rng(substream_seed(opts.seed, 13));

    double worst_grad = 0.0, worst_div = 0.0;
    for (int c = 0; c < 50; ++c) {
      ChaosPoly phi = random_poly(gspace, gspace.degree_cap - 1, 5, rng);
      int m = 1 + (c % gspace.dim);
      ChaosField lhs = gradient(conditional_project(phi, m));
      ChaosField rhs = conditional_project(gradient(phi), m);
      worst_grad = std::max(worst_grad, max_coeff_diff(lhs, rhs));
      ChaosField v = random_field(gspace, gspace.degree_cap - 1, 3, rng);
      worst_div = std::max(worst_div, max_coeff_diff(divergence(conditional_project(v, m), Overflow::Error),
                                                     conditional_project(divergence(v, Overflow::Error), m)));
    }
    out.push_back(exact_check("galerkin_gradient_commutation", worst_grad, 0.0));
    out.push_back(exact_check("galerkin_divergence_commutation", worst_div, 0.0));

    VectorFieldSpec spec = VectorFieldSpec::chaos(field, 0.0, 1.0);
    Batch batch4 = sample_gaussian(4, 48, substream_seed(opts.seed, 14));
    auto rows = galerkin_convergence(spec, {1, 2, 3}, 0.0, 1.0, batch4, solver);
    bool monotone = rows[0].flow_deviation > rows[1].flow_deviation &&
                    rows[1].flow_deviation > rows[2].flow_deviation;
    CheckResult c;
    c.name = "galerkin_flow_convergence";
    c.mode = "exact";
    c.value = rows[2].flow_deviation;
    c.tolerance = 1e-4;
    c.pass = monotone && rows[2].flow_deviation < 1e-4;
    c.note = "deviations m=1,2,3: " + std::to_string(rows[0].flow_deviation) + ", " +
             std::to_string(rows[1].flow_deviation) + ", " + std::to_string(rows[2].flow_deviation);
    out.push_back(c);
  }
  return out;
}

// ----------------------------------------------------------- flow-density --

std::vector<CheckResult> suite_flow_density(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  SolverOptions solver;

  VectorFieldSpec tanh_field = VectorFieldSpec::closed_form("tanh", 1, 0.0, 2.0);

  {
    double worst = 0.0;
    Batch pts = sample_gaussian(1, 1000, substream_seed(opts.seed, 15));
    for (double t : {0.5, 1.0}) {
      auto numeric = density_along_flow(tanh_field, 0.0, t, pts, DensityMode::DivergenceIntegral, solver);
      auto closed = density_along_flow(tanh_field, 0.0, t, pts, DensityMode::AnalyticChangeOfVariables, solver);
      for (std::size_t i = 0; i < numeric.size(); ++i)
        worst = std::max(worst, std::abs(std::exp(numeric[i]) - std::exp(closed[i])));
    }
    out.push_back(exact_check("tanh_density_two_routes", worst, 1e-6, "t in {0.5, 1}"));
  }

  {
    VectorFieldSpec rot = VectorFieldSpec::closed_form("rotation", 2, 0.0, 2.0);
    Batch pts = sample_gaussian(2, 256, substream_seed(opts.seed, 16));
    auto log_lambda = density_along_flow(rot, 0.0, 1.2, pts, DensityMode::DivergenceIntegral, solver);
    double worst = 0.0;
    for (double ll : log_lambda) worst = std::max(worst, std::abs(std::exp(ll) - 1.0));
    out.push_back(exact_check("rotation_density_is_one", worst, 1e-7));

    FlowResult res = integrate_flow(rot, 0.0, 1.2, sample_gaussian(2, 100000, substream_seed(opts.seed, 17)),
                                    FlowOptions{solver, false, {}});
    auto ks = measure_preservation_ks(res, substream_seed(opts.seed, 18), 1e-3);
    double worst_ratio = 0.0;
    for (auto& k : ks) worst_ratio = std::max(worst_ratio, k.statistic / k.threshold);
    CheckResult c;
    c.name = "rotation_measure_preservation_ks";
    c.mode = "mc";
    c.value = worst_ratio;
    c.tolerance = 1.0;
    c.pass = worst_ratio <= 1.0;
    c.note = "two-sample KS per coordinate at level 1e-3, N = 1e5";
    out.push_back(c);
  }

  {
    Batch pts = sample_gaussian(1, 100000, substream_seed(opts.seed, 19));
    auto log_lambda = density_along_flow(tanh_field, 0.0, 1.0, pts, DensityMode::DivergenceIntegral, solver);
    std::vector<double> lambda(log_lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = std::exp(log_lambda[i]);
    Estimate e = mean_and_se(lambda);
    out.push_back(mc_check("density_mean_is_one", std::abs(e.mean - 1.0) / e.std_error, "tanh field, N = 1e5"));
  }

  {
    FlowResult res = integrate_flow(tanh_field, 0.0, 1.0,
                                    sample_gaussian(1, 100000, substream_seed(opts.seed, 20)),
                                    FlowOptions{solver, true, {}});
    double worst_z = 0.0;
    GaussianSpace s1(1, 4);
    std::vector<ChaosPoly> polys{ChaosPoly::coordinate(s1, 0),
                                 multiply(ChaosPoly::coordinate(s1, 0), ChaosPoly::coordinate(s1, 0)),
                                 ChaosPoly::hermite(s1, MultiIndex::from_dense(std::vector<int>{3}))};
    for (auto& p : polys) {
      auto [lhs, rhs] = pushforward_pair(
          [&](std::span<const double> x) { return evaluate(p, x); }, res);
      double se = std::sqrt(lhs.std_error * lhs.std_error + rhs.std_error * rhs.std_error);
      if (se > 0.0) worst_z = std::max(worst_z, std::abs(lhs.mean - rhs.mean) / se);
    }
    out.push_back(mc_check("pushforward_change_of_variables", worst_z, "f in {x1, x1^2, h3(x1)}"));

    // Absolute cross-check of E[f o T] for f = x1^2 by 1-d quadrature of the
    // closed-form pushforward.
    auto [lhs, rhs] = pushforward_pair(
        [&](std::span<const double> x) { return x[0] * x[0]; }, res);
    double target = gh_expect_1d(64, [&](double x) {
      double y = std::asinh(std::exp(1.0) * std::sinh(x));
      return y * y;
    });
    double se = std::sqrt(lhs.std_error * lhs.std_error + rhs.std_error * rhs.std_error);
    out.push_back(mc_check("pushforward_quadrature_oracle",
                           se > 0 ? std::max(std::abs(lhs.mean - target), std::abs(rhs.mean - target)) / se : 0.0,
                           "E[(T x)^2] by Gauss-Hermite"));
  }

  {
    DensityLpCheck lp = density_lp_check(tanh_field, 0.0, 0.2, 2.0, 1.0, 20000,
                                         substream_seed(opts.seed, 21), solver);
    CheckResult c;
    c.name = "density_lp_bound";
    c.mode = "mc";
    c.value = lp.moment.mean;
    c.tolerance = lp.bound;
    c.pass = lp.pass;
    c.note = "E Lambda^2 vs exponential-moment bound, window |t-s| < theta/4";
    out.push_back(c);
  }

  {
    GaussianSpace s1(1, 4);
    ChaosPoly phi = ChaosPoly::coordinate(s1, 0);
    SolverOptions tight;
    tight.atol = 1e-12;
    tight.rtol = 1e-12;
    DerivativeCheck dc = density_derivative_check(tanh_field, 0.0, {0.1, 0.05, 0.025, 0.0125}, phi,
                                                  weighted_points_gh(1, 48), tight);
    double target = gh_expect_1d(64, [](double x) {
      double c = std::cosh(x);
      return x * (x * std::tanh(x) - 1.0 / (c * c));
    });
    CheckResult c;
    c.name = "density_derivative_rate";
    c.mode = "exact";
    c.value = dc.rate;
    c.tolerance = 0.9;
    c.pass = dc.rate >= 0.9 && std::abs(dc.target - target) <= 1e-8;
    c.note = "weak difference quotient of the density vs E[phi delta v], log-log rate";
    out.push_back(c);
  }
  return out;
}

// -------------------------------------------------------------------- pde --

std::vector<CheckResult> suite_pde(const VerifyOptions& opts) {
  std::vector<CheckResult> out;
  SolverOptions solver;
  GaussianSpace s2(2, 4);
  std::vector<double> rot_vals{0.0, 1.0, -1.0, 0.0};
  ChaosMatrix a = ChaosMatrix::constant(s2, rot_vals);

  std::vector<double> grid;
  for (int k = 0; k < 20; ++k) grid.push_back(0.05 + 0.1 * k);
  Batch batch = sample_gaussian(2, 64, substream_seed(opts.seed, 22));

  {
    double worst = 0.0, worst_gap = 0.0;
    for (auto& f0 : {ChaosPoly::coordinate(s2, 0),
                     ChaosPoly::hermite(s2, MultiIndex::from_dense(std::vector<int>{2, 0}))}) {
      auto rows = transport_pde_residual(a, f0, grid, batch, solver);
      for (auto& r : rows) {
        worst = std::max(worst, r.residual);
        worst_gap = std::max(worst_gap, r.identity_gap);
      }
    }
    out.push_back(exact_check("transport_residual", worst, 1e-6, "constant rotation generator, 20-point grid"));
    out.push_back(exact_check("transport_identity_gap", worst_gap, 1e-10,
                              "delta(A grad f) = <grad f, B>"));
  }

  {
    // Linear combinations of solutions solve the same equation.
    ChaosPoly f0 = linear_combine({{2.0, ChaosPoly::coordinate(s2, 0)},
                                   {3.0, ChaosPoly::hermite(s2, MultiIndex::from_dense(std::vector<int>{2, 0}))}});
    auto rows = transport_pde_residual(a, f0, grid, batch, solver);
    double worst = 0.0;
    for (auto& r : rows) worst = std::max(worst, r.residual);
    out.push_back(exact_check("transport_superposition", worst, 1e-6));
  }

  {
    ChaosField b = op_divergence(matrix_transpose(a), Overflow::Error);
    VectorFieldSpec spec = VectorFieldSpec::chaos(b, 0.0, 3.0);
    double res = group_law_residual(spec, 0.4, 0.8, batch, solver);
    out.push_back(exact_check("autonomous_group_law", res, 1e-7, "T_s T_t = T_{s+t}"));
  }

  {
    // delta(A grad g) = <grad g, op_divergence(A^T)> for random chaos antisymmetric A.
    GaussianSpace space(opts.dim, opts.cap);
    Rng rng(substream_seed(opts.seed, 23));
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
      ChaosMatrix ar = random_antisym_matrix(space, 2, 2, rng);
      ChaosPoly g = random_poly(space, opts.cap - 3, 5, rng);
      ChaosPoly lhs = divergence(matrix_apply(ar, gradient(g), Overflow::Error), Overflow::Error);
      ChaosPoly rhs = field_pair(gradient(g), op_divergence(matrix_transpose(ar), Overflow::Error),
                                 Overflow::Error);
      worst = std::max(worst, max_coeff_diff(lhs, rhs));
    }
    out.push_back(exact_check("transport_identity_random_antisym", worst, 1e-10,
                              "100 random antisymmetric chaos matrices"));
  }
  return out;
}

// ---------------------------------------------------------------- adapted --

std::vector<CheckResult> suite_adapted(const VerifyOptions& opts) {
  std::vector<CheckResult> out;

  ChaosField adapted = adapted_test_field(opts.seed);
  VectorFieldSpec spec = VectorFieldSpec::chaos(adapted, 0.0, 1.0);
  Batch probes = sample_gaussian(3, 6, substream_seed(opts.seed, 24));
  std::vector<double> thetas{0.34, 0.67, 1.0};
  AdaptednessReport rep = adaptedness_check(spec, 0.0, 0.5, thetas, probes, 1e-7);

  {
    CheckResult c;
    c.name = "adapted_field_level";
    c.mode = "exact";
    c.value = rep.field_adapted ? 0.0 : 1.0;
    c.tolerance = 0.0;
    c.pass = rep.field_adapted;
    out.push_back(c);
  }
  {
    double worst = 0.0;
    for (auto& r : rep.rows) worst = std::max(worst, r.max_influence);
    out.push_back(exact_check("adapted_flow_probe", worst, 1e-7,
                              "cross-coordinate influence, theta grid"));
  }
  {
    // theta = 1 leaves nothing to perturb: trivially adapted.
    bool ok = rep.rows.back().pass && rep.rows.back().m == 3;
    CheckResult c;
    c.name = "full_filtration_trivial";
    c.mode = "exact";
    c.value = ok ? 0.0 : 1.0;
    c.tolerance = 0.0;
    c.pass = ok;
    out.push_back(c);
  }
  {
    // Deliberately non-adapted: component 1 reads direction 2.
    GaussianSpace s2(2, 4);
    ChaosField bad(s2);
    bad.set_component(0, ChaosPoly::coordinate(s2, 1));
    VectorFieldSpec bad_spec = VectorFieldSpec::chaos(bad, 0.0, 1.0);
    AdaptednessReport bad_rep =
        adaptedness_check(bad_spec, 0.0, 0.5, {0.5}, sample_gaussian(2, 4, opts.seed), 1e-7);
    CheckResult c;
    c.name = "non_adapted_field_detected";
    c.mode = "exact";
    c.value = bad_rep.field_adapted ? 1.0 : 0.0;
    c.tolerance = 0.0;
    c.pass = !bad_rep.field_adapted && bad_rep.offending_component == 0;
    out.push_back(c);
  }
  return out;
}

}  // namespace

ChaosField galerkin_test_field(std::uint64_t seed) {
  GaussianSpace space(4, 3, {1.0, 0.5, 1.0 / 3.0, 0.25});
  Rng rng(substream_seed(seed, 40));
  ChaosField v(space);
  const double gamma = 0.02;
  double scale = 0.3;
  for (int k = 0; k < 4; ++k) {
    // Direction-k slice: components 0..k, every term touching direction k.
    for (int i = 0; i <= k; ++i) {
      ChaosPoly extra(space);
      for (int t = 0; t < 3; ++t) {
        MultiIndex alpha = random_multi_index(rng, k + 1, 1).raised(k);
        extra.add(alpha, scale * rng.normal());
      }
      v.set_component(i, v.component(i) + extra);
    }
    scale *= gamma;
  }
  return v;
}

ChaosField adapted_test_field(std::uint64_t seed) {
  GaussianSpace space(3, 4);
  Rng rng(substream_seed(seed, 41));
  ChaosField v(space);
  for (int i = 0; i < 3; ++i) {
    ChaosPoly comp(space);
    for (int t = 0; t < 4; ++t)
      comp.add(random_multi_index(rng, i + 1, 2), 0.2 * rng.normal());
    v.set_component(i, comp);
  }
  return v;
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"duality",   "product-rule", "spectral",
                                              "operator",  "hodge",        "flow-basic",
                                              "flow-density", "pde",       "adapted"};
  return names;
}

Report run_verify_suite(const std::string& suite, const VerifyOptions& opts) {
  Report rep;
  rep.suite = suite;
  rep.config = json{{"seed", opts.seed},
                    {"cases", opts.cases},
                    {"n_mc", opts.n_mc},
                    {"dim", opts.dim},
                    {"cap", opts.cap}};
  if (suite == "duality")
    rep.checks = suite_duality(opts);
  else if (suite == "product-rule")
    rep.checks = suite_product_rule(opts);
  else if (suite == "spectral")
    rep.checks = suite_spectral(opts);
  else if (suite == "operator")
    rep.checks = suite_operator(opts);
  else if (suite == "hodge")
    rep.checks = suite_hodge(opts);
  else if (suite == "flow-basic")
    rep.checks = suite_flow_basic(opts);
  else if (suite == "flow-density")
    rep.checks = suite_flow_density(opts);
  else if (suite == "pde")
    rep.checks = suite_pde(opts);
  else if (suite == "adapted")
    rep.checks = suite_adapted(opts);
  else
    throw std::invalid_argument("unknown verify suite '" + suite + "'");
  return rep;
}

}  // namespace chaosflow
