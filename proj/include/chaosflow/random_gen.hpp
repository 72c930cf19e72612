#pragma once

#include "chaosflow/chaos_matrix.hpp"
#include "chaosflow/montecarlo.hpp"

namespace chaosflow {

// Small deterministic generator for seeded test suites.
struct Rng {
  std::uint64_t counter = 0;
  std::uint64_t seed = 0;

  explicit Rng(std::uint64_t s) : seed(s) {}
  double uniform() { return uniform_at(seed, counter++); }
  double normal() { return normal_at(seed, counter++); }
  int uniform_int(int n) { return int(uniform() * n) % n; }  // n >= 1
};

// Random multi-index with total degree <= max_degree, optionally restricted to
// the first `dirs` directions.
MultiIndex random_multi_index(Rng& rng, int dirs, int max_degree, bool nonzero = false);

ChaosPoly random_poly(const GaussianSpace& space, int max_degree, int n_terms, Rng& rng,
                      double scale = 1.0, bool zero_mean = false);

ChaosField random_field(const GaussianSpace& space, int max_degree, int terms_per_component,
                        Rng& rng, double scale = 1.0);

ChaosMatrix random_matrix(const GaussianSpace& space, int max_degree, int terms_per_entry, Rng& rng,
                          double scale = 1.0);

// A + A^T = 0 with random chaos entries above the diagonal.
ChaosMatrix random_antisym_matrix(const GaussianSpace& space, int max_degree, int terms_per_entry,
                                  Rng& rng, double scale = 1.0);

// Divergence-free field obtained as the operator divergence of a random
// antisymmetric matrix (degree grows by one over the matrix entries).
ChaosField random_divergence_free(const GaussianSpace& space, int max_degree, Rng& rng,
                                  double scale = 1.0);

}  // namespace chaosflow
