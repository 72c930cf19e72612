#include "chaosflow/operator_calculus.hpp"

namespace chaosflow {

ChaosField op_divergence(const ChaosMatrix& k, Overflow policy) {
  ChaosField out(k.space());
  for (int i = 0; i < k.dim(); ++i) out.set_component(i, divergence(k.row(i), policy));
  return out;
}

ChaosMatrix gradient_matrix(const ChaosField& u) {
  ChaosMatrix out(u.space());
  for (int i = 0; i < u.dim(); ++i) {
    ChaosField gi = gradient(u.component(i));
    for (int j = 0; j < u.dim(); ++j) out.set_entry(i, j, gi.component(j));
  }
  return out;
}

ChaosPoly weakb_combine(const ChaosMatrix& k, const ChaosField& f, Overflow policy) {
  require_same_space(k.space(), f.space(), "weakb_combine");
  return divergence(matrix_apply(matrix_transpose(k), f, policy), policy);
}

SecondMomentCheck second_moment_check(const ChaosField& u, const ChaosField& g, Overflow policy) {
  require_same_space(u.space(), g.space(), "second_moment_check");
  SecondMomentCheck out;
  ChaosPoly du = divergence(u, policy);
  ChaosPoly dg = divergence(g, policy);
  out.lhs = l2_inner(du, dg);

  double pairing = expectation(field_pair(u, g, policy));
  ChaosMatrix grad_u = gradient_matrix(u);
  ChaosMatrix grad_g = gradient_matrix(g);
  out.rhs_trace = pairing + expectation(matrix_product_trace(grad_g, grad_u, policy));

  ChaosField ddu_t = op_divergence(matrix_transpose(grad_u), policy);
  out.rhs_pairing = pairing + expectation(field_pair(ddu_t, g, policy));
  return out;
}

}  // namespace chaosflow
