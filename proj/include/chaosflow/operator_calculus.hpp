#pragma once

#include "chaosflow/malliavin.hpp"

namespace chaosflow {

// Divergence of an operator-valued random variable: component i is the scalar
// divergence of row i of K (equivalently the pairing <delta-delta K, e_i> =
// delta(K^T e_i) with the apply convention used throughout).
ChaosField op_divergence(const ChaosMatrix& k, Overflow policy = Overflow::Error);

// Gradient of a field as a matrix: entry (i,j) = d_j u_i, so row i is grad(u_i).
ChaosMatrix gradient_matrix(const ChaosField& u);

// delta(K^T F) computed directly; the identity against
//   <F, delta-delta K> - tr(K^T grad F)
// is what the tests exercise.
ChaosPoly weakb_combine(const ChaosMatrix& k, const ChaosField& f, Overflow policy = Overflow::Error);

// Three routes to the same second moment:
//   lhs  = E(delta u . delta G)
//   rhs1 = E<u,G> + E tr(grad G grad u)
//   rhs2 = E<u,G> + E<delta (grad u)^T, G>
struct SecondMomentCheck {
  double lhs = 0.0;
  double rhs_trace = 0.0;
  double rhs_pairing = 0.0;
};

SecondMomentCheck second_moment_check(const ChaosField& u, const ChaosField& g,
                                      Overflow policy = Overflow::Error);

}  // namespace chaosflow
