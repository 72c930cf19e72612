#pragma once

#include "chaosflow/chaos_field.hpp"

namespace chaosflow {

// Operator-valued random variable with ChaosPoly entries K_ij, row-major.
class ChaosMatrix {
 public:
  explicit ChaosMatrix(GaussianSpace space)
      : space_(std::move(space)),
        entries_(std::size_t(space_.dim) * space_.dim, ChaosPoly(space_)) {}

  static ChaosMatrix zero(const GaussianSpace& s) { return ChaosMatrix(s); }

  static ChaosMatrix identity(const GaussianSpace& s) {
    ChaosMatrix k(s);
    for (int i = 0; i < s.dim; ++i) k.set_entry(i, i, ChaosPoly::constant(s, 1.0));
    return k;
  }

  // Constant matrix from row-major values.
  static ChaosMatrix constant(const GaussianSpace& s, std::span<const double> rowmajor) {
    if (int(rowmajor.size()) != s.dim * s.dim)
      throw DimensionMismatchError("ChaosMatrix::constant: size mismatch");
    ChaosMatrix k(s);
    for (int i = 0; i < s.dim; ++i)
      for (int j = 0; j < s.dim; ++j)
        k.set_entry(i, j, ChaosPoly::constant(s, rowmajor[std::size_t(i) * s.dim + j]));
    return k;
  }

  const GaussianSpace& space() const { return space_; }
  int dim() const { return space_.dim; }

  const ChaosPoly& entry(int i, int j) const { return entries_.at(idx(i, j)); }
  void set_entry(int i, int j, ChaosPoly p) {
    require_same_space(space_, p.space(), "ChaosMatrix::set_entry");
    entries_.at(idx(i, j)) = std::move(p);
  }

  // Row i as a field: component j = K_ij.
  ChaosField row(int i) const {
    ChaosField v(space_);
    for (int j = 0; j < dim(); ++j) v.set_component(j, entry(i, j));
    return v;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (auto& e : entries_) m = std::max(m, e.max_abs_coeff());
    return m;
  }

  bool is_zero() const {
    for (auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }

  friend bool operator==(const ChaosMatrix& a, const ChaosMatrix& b) {
    return a.space_ == b.space_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t idx(int i, int j) const {
    if (i < 0 || i >= dim() || j < 0 || j >= dim())
      throw std::out_of_range("ChaosMatrix: entry index out of range");
    return std::size_t(i) * dim() + j;
  }

  GaussianSpace space_;
  std::vector<ChaosPoly> entries_;
};

ChaosMatrix operator+(const ChaosMatrix& a, const ChaosMatrix& b);
ChaosMatrix operator-(const ChaosMatrix& a, const ChaosMatrix& b);
ChaosMatrix operator*(double s, const ChaosMatrix& k);

ChaosMatrix matrix_transpose(const ChaosMatrix& k);
ChaosPoly matrix_trace(const ChaosMatrix& k);

// Apply to a deterministic covector: component i = sum_j K_ij l_j.
ChaosField matrix_apply(const ChaosMatrix& k, std::span<const double> l);

// Apply to a random field: component i = sum_j K_ij * F_j (Hermite products).
ChaosField matrix_apply(const ChaosMatrix& k, const ChaosField& f, Overflow policy = Overflow::Error);

// Entry-wise product contraction tr(A B) = sum_ij A_ij B_ji.
ChaosPoly matrix_product_trace(const ChaosMatrix& a, const ChaosMatrix& b, Overflow policy = Overflow::Error);

}  // namespace chaosflow
