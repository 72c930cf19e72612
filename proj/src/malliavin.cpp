#include "chaosflow/malliavin.hpp"

#include <cmath>

namespace chaosflow {

ChaosField gradient(const ChaosPoly& phi) {
  ChaosField out(phi.space());
  for (int i = 0; i < phi.space().dim; ++i) {
    ChaosPoly comp(phi.space());
    for (auto& [alpha, c] : phi.coeffs()) {
      int e = alpha.exponent(i);
      if (e > 0) comp.add(alpha.lowered(i), std::sqrt(double(e)) * c);
    }
    out.set_component(i, std::move(comp));
  }
  return out;
}

ChaosPoly divergence(const ChaosField& v, Overflow policy) {
  const int cap = v.space().degree_cap;
  ChaosPoly out(v.space());
  bool overflowed = false;
  for (int i = 0; i < v.dim(); ++i) {
    for (auto& [alpha, c] : v.component(i).coeffs()) {
      if (alpha.degree() + 1 > cap) {
        overflowed = true;
        continue;
      }
      out.add(alpha.raised(i), std::sqrt(double(alpha.exponent(i) + 1)) * c);
    }
  }
  if (overflowed && policy == Overflow::Error)
    throw DegreeOverflowError("divergence: result degree exceeds cap");
  return out;
}

SpectralFunction SpectralFunction::resolvent_power(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("resolvent_power: beta must be > 0");
  return {Kind::ResolventPower, beta};
}

SpectralFunction SpectralFunction::ou_semigroup(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("ou_semigroup: t must be >= 0");
  return {Kind::OuSemigroup, t};
}

double SpectralFunction::eigenvalue(int degree) const {
  switch (kind) {
    case Kind::NumberOp:
      return double(degree);
    case Kind::InverseL:
      return 1.0 / double(degree);  // callers guarantee degree >= 1
    case Kind::ResolventPower:
      return std::pow(1.0 + double(degree), -param);
    case Kind::OuSemigroup:
      return std::exp(-double(degree) * param);
  }
  return 0.0;
}

ChaosPoly spectral_apply(const ChaosPoly& p, const SpectralFunction& f) {
  if (f.kind == SpectralFunction::Kind::InverseL && expectation(p) != 0.0)
    throw std::domain_error("spectral_apply: inverse of the number operator needs zero mean");
  ChaosPoly out(p.space());
  for (auto& [alpha, c] : p.coeffs()) out.set(alpha, f.eigenvalue(alpha.degree()) * c);
  return out;
}

ChaosField spectral_apply(const ChaosField& v, const SpectralFunction& f) {
  ChaosField out(v.space());
  for (int i = 0; i < v.dim(); ++i) out.set_component(i, spectral_apply(v.component(i), f));
  return out;
}

namespace {
void check_project_range(int m, int dim) {
  if (m < 1 || m > dim) throw std::out_of_range("conditional_project: m out of range");
}
}  // namespace

ChaosPoly conditional_project(const ChaosPoly& p, int m) {
  check_project_range(m, p.space().dim);
  ChaosPoly out(p.space());
  for (auto& [alpha, c] : p.coeffs())
    if (alpha.supported_within(m)) out.set(alpha, c);
  return out;
}

ChaosField conditional_project(const ChaosField& v, int m) {
  check_project_range(m, v.space().dim);
  ChaosField out(v.space());
  for (int i = 0; i < m; ++i) out.set_component(i, conditional_project(v.component(i), m));
  return out;
}

ChaosMatrix conditional_project(const ChaosMatrix& k, int m) {
  check_project_range(m, k.space().dim);
  ChaosMatrix out(k.space());
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) out.set_entry(i, j, conditional_project(k.entry(i, j), m));
  return out;
}

std::vector<Estimate> mehler_estimate(const ChaosPoly& p, double t, const Batch& points, long n_samples,
                                      std::uint64_t seed, bool antithetic) {
  if (t < 0.0) throw std::invalid_argument("mehler_estimate: t must be >= 0");
  if (n_samples < 2) throw std::invalid_argument("mehler_estimate: need at least 2 samples");
  if (points.dim != p.space().dim) throw DimensionMismatchError("mehler_estimate: point dim mismatch");
  const int dim = points.dim;
  const double decay = std::exp(-t);
  const double noise = std::sqrt(std::max(0.0, 1.0 - decay * decay));
  std::vector<Estimate> out;
  out.reserve(points.n);
  std::vector<double> mix(dim), values;
  for (long pt = 0; pt < points.n; ++pt) {
    auto w = points.row(pt);
    if (t == 0.0) {
      // T_0 is the identity; no averaging needed.
      out.push_back(Estimate{evaluate(p, w), 0.0, 1, seed});
      continue;
    }
    const std::uint64_t point_seed = substream_seed(seed, std::uint64_t(pt));
    values.clear();
    const long pairs = antithetic ? (n_samples + 1) / 2 : n_samples;
    for (long s = 0; s < pairs; ++s) {
      for (int j = 0; j < dim; ++j)
        mix[j] = decay * w[j] + noise * normal_at(point_seed, std::uint64_t(s) * dim + j);
      double v1 = evaluate(p, mix);
      if (antithetic) {
        for (int j = 0; j < dim; ++j) mix[j] = 2.0 * decay * w[j] - mix[j];
        values.push_back(0.5 * (v1 + evaluate(p, mix)));
      } else {
        values.push_back(v1);
      }
    }
    out.push_back(mean_and_se(values, seed));
  }
  return out;
}

SobolevEstimate sobolev_norm(const ChaosPoly& phi, double p, GradientNormMode mode, long n_samples,
                             std::uint64_t seed) {
  if (!(p >= 1.0)) throw std::invalid_argument("sobolev_norm: need p >= 1");
  if (mode == GradientNormMode::Weighted && !phi.space().has_weights())
    throw std::invalid_argument("sobolev_norm: weighted mode needs a weight profile");
  const auto& space = phi.space();
  ChaosField grad = gradient(phi);
  Batch batch = sample_gaussian(space.dim, n_samples, seed);
  std::vector<double> f_pow(n_samples), g_pow(n_samples);
  for (long i = 0; i < n_samples; ++i) {
    auto x = batch.row(i);
    f_pow[i] = std::pow(std::abs(evaluate(phi, x)), p);
    double norm_sq = 0.0;
    for (int j = 0; j < space.dim; ++j) {
      double gj = evaluate(grad.component(j), x);
      double q = mode == GradientNormMode::Weighted ? space.weights[j] : 1.0;
      norm_sq += q * q * gj * gj;
    }
    g_pow[i] = std::pow(norm_sq, p / 2.0);
  }
  Estimate ef = mean_and_se(f_pow, seed);
  Estimate eg = mean_and_se(g_pow, seed);
  double inner = ef.mean + eg.mean;
  double inner_se = std::sqrt(ef.std_error * ef.std_error + eg.std_error * eg.std_error);
  SobolevEstimate out;
  out.value = std::pow(inner, 1.0 / p);
  // Delta method through x -> x^(1/p).
  out.std_error = inner > 0.0 ? (1.0 / p) * std::pow(inner, 1.0 / p - 1.0) * inner_se : 0.0;
  out.n = n_samples;
  out.seed = seed;
  return out;
}

std::vector<CounterexampleRow> hermite_counterexample_demo(long m_max,
                                                           const std::function<double(long)>& q,
                                                           const std::vector<long>& checkpoints) {
  if (m_max < 2) throw std::invalid_argument("hermite_counterexample_demo: need m_max >= 2");
  std::vector<long> marks = checkpoints;
  if (marks.empty()) {
    for (long m = 2; m < m_max; m *= 2) marks.push_back(m);
    marks.push_back(m_max);
  }
  std::vector<CounterexampleRow> rows;
  double sum_h = 0.0, sum_w = 0.0, inc_h = 0.0, inc_w = 0.0;
  std::size_t next = 0;
  for (long n = 2; n <= m_max; ++n) {
    double log_n = std::log(double(n));
    inc_h = 2.0 / (log_n * log_n);
    double qn = q(n);
    inc_w = inc_h * qn * qn;
    sum_h += inc_h;
    sum_w += inc_w;
    while (next < marks.size() && marks[next] == n) {
      rows.push_back(CounterexampleRow{n, sum_h, sum_w, inc_h, inc_w});
      ++next;
    }
  }
  return rows;
}

}  // namespace chaosflow
