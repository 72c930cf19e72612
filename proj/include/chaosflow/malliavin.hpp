#pragma once

#include "chaosflow/chaos_matrix.hpp"
#include "chaosflow/montecarlo.hpp"

namespace chaosflow {

// Gradient: component i is the annihilation ladder, coefficient c_alpha
// contributes sqrt(alpha_i) c_alpha at alpha - delta_i. Always exact.
ChaosField gradient(const ChaosPoly& phi);

// Divergence (adjoint of the gradient): component i contributes the creation
// ladder sqrt(alpha_i + 1) c_alpha at alpha + delta_i. Degree may grow by one.
ChaosPoly divergence(const ChaosField& v, Overflow policy = Overflow::Error);

// Spectral functions of the number operator: coefficients at total degree k
// are multiplied by g(k).
struct SpectralFunction {
  enum class Kind { NumberOp, InverseL, ResolventPower, OuSemigroup };
  Kind kind = Kind::NumberOp;
  double param = 0.0;  // beta for ResolventPower, t for OuSemigroup

  static SpectralFunction number_op() { return {Kind::NumberOp, 0.0}; }
  static SpectralFunction inverse_l() { return {Kind::InverseL, 0.0}; }
  static SpectralFunction resolvent_power(double beta);
  static SpectralFunction ou_semigroup(double t);

  double eigenvalue(int degree) const;
};

ChaosPoly spectral_apply(const ChaosPoly& p, const SpectralFunction& f);
ChaosField spectral_apply(const ChaosField& v, const SpectralFunction& f);  // per component

// Conditional expectation onto the sigma-algebra of the first m coordinates:
// keeps exactly the coefficients supported in directions 1..m. For fields the
// components beyond m are zeroed as well; for matrices, rows and columns.
ChaosPoly conditional_project(const ChaosPoly& p, int m);
ChaosField conditional_project(const ChaosField& v, int m);
ChaosMatrix conditional_project(const ChaosMatrix& k, int m);

// Monte-Carlo Ornstein-Uhlenbeck action via the two-point mixture
//   (T_t p)(w) = E p(e^{-t} w + sqrt(1 - e^{-2t}) w~).
// Independent of the spectral route; serves as its oracle. Antithetic pairing
// (w~, -w~) is on by default and is part of the seeded reproducibility contract.
std::vector<Estimate> mehler_estimate(const ChaosPoly& p, double t, const Batch& points, long n_samples,
                                      std::uint64_t seed, bool antithetic = true);

enum class GradientNormMode { CameronMartin, Weighted };

struct SobolevEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long n = 0;
  std::uint64_t seed = 0;
};

// MC estimate of ( E|phi|^p + E|grad phi|^p )^(1/p), with the gradient norm
// either Euclidean or weighted by the space's q profile.
SobolevEstimate sobolev_norm(const ChaosPoly& phi, double p, GradientNormMode mode, long n_samples,
                             std::uint64_t seed);

// Gradient-norm table for the partial sums a_m = sum_{n=2..m} h_{2n}(x_n)/(sqrt(n) log n):
//   |grad a_m|_H^2      = sum_{n=2..m} 2/(log n)^2          (divergent)
//   |Q grad a_m|^2      = sum_{n=2..m} 2 q_n^2/(log n)^2    (convergent for square-summable q)
// Rows are emitted at the requested checkpoints; the last row also reports the
// final per-step increments.
struct CounterexampleRow {
  long m = 0;
  double grad_norm_sq_h = 0.0;
  double grad_norm_sq_weighted = 0.0;
  double last_increment_h = 0.0;
  double last_increment_weighted = 0.0;
};

std::vector<CounterexampleRow> hermite_counterexample_demo(long m_max,
                                                           const std::function<double(long)>& q,
                                                           const std::vector<long>& checkpoints = {});

}  // namespace chaosflow
