#include "chaosflow/random_gen.hpp"

#include "chaosflow/operator_calculus.hpp"

namespace chaosflow {

MultiIndex random_multi_index(Rng& rng, int dirs, int max_degree, bool nonzero) {
  int degree = rng.uniform_int(max_degree + 1);
  if (nonzero && degree == 0) degree = 1 + rng.uniform_int(max_degree);
  std::vector<int> dense(dirs, 0);
  for (int d = 0; d < degree; ++d) dense[rng.uniform_int(dirs)] += 1;
  return MultiIndex::from_dense(dense);
}

ChaosPoly random_poly(const GaussianSpace& space, int max_degree, int n_terms, Rng& rng,
                      double scale, bool zero_mean) {
  ChaosPoly p(space);
  for (int k = 0; k < n_terms; ++k) {
    MultiIndex alpha = random_multi_index(rng, space.dim, max_degree, zero_mean);
    p.add(alpha, scale * rng.normal());
  }
  if (zero_mean) p.set(MultiIndex{}, 0.0);
  return p;
}

ChaosField random_field(const GaussianSpace& space, int max_degree, int terms_per_component,
                        Rng& rng, double scale) {
  ChaosField v(space);
  for (int i = 0; i < space.dim; ++i)
    v.set_component(i, random_poly(space, max_degree, terms_per_component, rng, scale));
  return v;
}

ChaosMatrix random_matrix(const GaussianSpace& space, int max_degree, int terms_per_entry, Rng& rng,
                          double scale) {
  ChaosMatrix k(space);
  for (int i = 0; i < space.dim; ++i)
    for (int j = 0; j < space.dim; ++j)
      k.set_entry(i, j, random_poly(space, max_degree, terms_per_entry, rng, scale));
  return k;
}

ChaosMatrix random_antisym_matrix(const GaussianSpace& space, int max_degree, int terms_per_entry,
                                  Rng& rng, double scale) {
  ChaosMatrix a(space);
  for (int i = 0; i < space.dim; ++i) {
    for (int j = i + 1; j < space.dim; ++j) {
      ChaosPoly p = random_poly(space, max_degree, terms_per_entry, rng, scale);
      a.set_entry(i, j, p);
      a.set_entry(j, i, -1.0 * p);
    }
  }
  return a;
}

ChaosField random_divergence_free(const GaussianSpace& space, int max_degree, Rng& rng,
                                  double scale) {
  int entry_degree = std::max(0, max_degree - 1);
  ChaosMatrix a = random_antisym_matrix(space, entry_degree, 3, rng, scale);
  return op_divergence(a, Overflow::Error);
}

}  // namespace chaosflow
