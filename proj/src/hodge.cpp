#include "chaosflow/hodge.hpp"

namespace chaosflow {

HodgeDecomposition hodge_decompose(const ChaosField& v, Overflow policy) {
  ChaosPoly dv = divergence(v, policy);
  ChaosPoly psi = spectral_apply(dv, SpectralFunction::inverse_l());
  ChaosField exact = gradient(psi);
  return HodgeDecomposition{v - exact, std::move(exact), std::move(psi)};
}

bool is_divergence_free(const ChaosField& v, double tol) {
  return divergence(v, Overflow::Error).max_abs_coeff() <= tol;
}

ChaosMatrix antisym_representation(const ChaosField& v0, Overflow policy, double tol) {
  if (!is_divergence_free(v0, tol))
    throw std::domain_error("antisym_representation: input is not divergence-free");
  ChaosField u = spectral_apply(v0, SpectralFunction::resolvent_power(1.0));
  ChaosMatrix j = gradient_matrix(u);
  ChaosMatrix a = j - matrix_transpose(j);
  (void)policy;  // the ladder steps here only lower degree; nothing can overflow
  return a;
}

}  // namespace chaosflow
