#include "chaosflow/chaos_field.hpp"

#include "chaosflow/chaos_matrix.hpp"

namespace chaosflow {

ChaosField operator+(const ChaosField& a, const ChaosField& b) {
  require_same_space(a.space(), b.space(), "field +");
  ChaosField out(a.space());
  for (int i = 0; i < a.dim(); ++i) out.set_component(i, a.component(i) + b.component(i));
  return out;
}

ChaosField operator-(const ChaosField& a, const ChaosField& b) {
  require_same_space(a.space(), b.space(), "field -");
  ChaosField out(a.space());
  for (int i = 0; i < a.dim(); ++i) out.set_component(i, a.component(i) - b.component(i));
  return out;
}

ChaosField operator*(double s, const ChaosField& v) {
  ChaosField out(v.space());
  for (int i = 0; i < v.dim(); ++i) out.set_component(i, s * v.component(i));
  return out;
}

ChaosPoly field_pair(const ChaosField& u, const ChaosField& v, Overflow policy) {
  require_same_space(u.space(), v.space(), "field_pair");
  ChaosPoly acc(u.space());
  for (int i = 0; i < u.dim(); ++i) {
    ChaosPoly term = multiply(u.component(i), v.component(i), policy);
    acc = acc + term;
  }
  return acc;
}

std::vector<double> evaluate_field(const ChaosField& v, std::span<const double> x) {
  std::vector<double> out(v.dim());
  for (int i = 0; i < v.dim(); ++i) out[i] = evaluate(v.component(i), x);
  return out;
}

ChaosMatrix operator+(const ChaosMatrix& a, const ChaosMatrix& b) {
  require_same_space(a.space(), b.space(), "matrix +");
  ChaosMatrix out(a.space());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out.set_entry(i, j, a.entry(i, j) + b.entry(i, j));
  return out;
}

ChaosMatrix operator-(const ChaosMatrix& a, const ChaosMatrix& b) {
  require_same_space(a.space(), b.space(), "matrix -");
  ChaosMatrix out(a.space());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out.set_entry(i, j, a.entry(i, j) - b.entry(i, j));
  return out;
}

ChaosMatrix operator*(double s, const ChaosMatrix& k) {
  ChaosMatrix out(k.space());
  for (int i = 0; i < k.dim(); ++i)
    for (int j = 0; j < k.dim(); ++j) out.set_entry(i, j, s * k.entry(i, j));
  return out;
}

ChaosMatrix matrix_transpose(const ChaosMatrix& k) {
  ChaosMatrix out(k.space());
  for (int i = 0; i < k.dim(); ++i)
    for (int j = 0; j < k.dim(); ++j) out.set_entry(i, j, k.entry(j, i));
  return out;
}

ChaosPoly matrix_trace(const ChaosMatrix& k) {
  ChaosPoly acc(k.space());
  for (int i = 0; i < k.dim(); ++i) acc = acc + k.entry(i, i);
  return acc;
}

ChaosField matrix_apply(const ChaosMatrix& k, std::span<const double> l) {
  if (int(l.size()) != k.dim()) throw DimensionMismatchError("matrix_apply: covector length mismatch");
  ChaosField out(k.space());
  for (int i = 0; i < k.dim(); ++i) {
    ChaosPoly acc(k.space());
    for (int j = 0; j < k.dim(); ++j)
      if (l[j] != 0.0) acc = acc + l[j] * k.entry(i, j);
    out.set_component(i, std::move(acc));
  }
  return out;
}

ChaosField matrix_apply(const ChaosMatrix& k, const ChaosField& f, Overflow policy) {
  require_same_space(k.space(), f.space(), "matrix_apply");
  ChaosField out(k.space());
  for (int i = 0; i < k.dim(); ++i) {
    ChaosPoly acc(k.space());
    for (int j = 0; j < k.dim(); ++j) acc = acc + multiply(k.entry(i, j), f.component(j), policy);
    out.set_component(i, std::move(acc));
  }
  return out;
}

ChaosPoly matrix_product_trace(const ChaosMatrix& a, const ChaosMatrix& b, Overflow policy) {
  require_same_space(a.space(), b.space(), "matrix_product_trace");
  ChaosPoly acc(a.space());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) acc = acc + multiply(a.entry(i, j), b.entry(j, i), policy);
  return acc;
}

}  // namespace chaosflow
