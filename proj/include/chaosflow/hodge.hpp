#pragma once

#include "chaosflow/operator_calculus.hpp"

namespace chaosflow {

// v = v0 + grad(psi) with delta(v0) = 0 and E[psi] = 0.
struct HodgeDecomposition {
  ChaosField divergence_free;  // v0
  ChaosField exact;            // grad(psi)
  ChaosPoly potential;         // psi
};

// Exact split of a field into divergence-free and exact parts:
//   psi = L^{-1} delta v  (zero mean),  v_e = grad psi,  v0 = v - v_e.
// The intermediate delta v raises degree by one; the gradient of L^{-1}
// brings it back, so inputs need one degree of headroom below the cap.
HodgeDecomposition hodge_decompose(const ChaosField& v, Overflow policy = Overflow::Error);

bool is_divergence_free(const ChaosField& v, double tol = 1e-12);

// Antisymmetric representation of a divergence-free field: with
// u = (1+L)^{-1} v0 (component-wise), A = grad u - (grad u)^T satisfies
// A + A^T = 0 and op_divergence(A) = v0. Rejects inputs whose divergence is
// not zero (within tol) rather than projecting them.
ChaosMatrix antisym_representation(const ChaosField& v0, Overflow policy = Overflow::Error,
                                   double tol = 1e-12);

}  // namespace chaosflow
