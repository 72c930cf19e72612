#pragma once

#include "chaosflow/chaos_poly.hpp"

namespace chaosflow {

// Vector-valued random variable: one ChaosPoly per basis direction.
class ChaosField {
 public:
  explicit ChaosField(GaussianSpace space)
      : space_(std::move(space)), comps_(space_.dim, ChaosPoly(space_)) {}

  static ChaosField zero(const GaussianSpace& s) { return ChaosField(s); }

  // The deterministic basis field e_i (constant 1 in component i).
  static ChaosField basis(const GaussianSpace& s, int i) {
    ChaosField v(s);
    v.set_component(i, ChaosPoly::constant(s, 1.0));
    return v;
  }

  // The identity field omega -> omega: component i is x_i.
  static ChaosField identity(const GaussianSpace& s) {
    ChaosField v(s);
    for (int i = 0; i < s.dim; ++i) v.set_component(i, ChaosPoly::coordinate(s, i));
    return v;
  }

  const GaussianSpace& space() const { return space_; }
  int dim() const { return space_.dim; }

  const ChaosPoly& component(int i) const { return comps_.at(i); }
  void set_component(int i, ChaosPoly p) {
    require_same_space(space_, p.space(), "ChaosField::set_component");
    comps_.at(i) = std::move(p);
  }

  bool is_zero() const {
    for (auto& c : comps_)
      if (!c.is_zero()) return false;
    return true;
  }

  int degree() const {
    int d = 0;
    for (auto& c : comps_) d = std::max(d, c.degree());
    return d;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (auto& c : comps_) m = std::max(m, c.max_abs_coeff());
    return m;
  }

  friend bool operator==(const ChaosField& a, const ChaosField& b) {
    return a.space_ == b.space_ && a.comps_ == b.comps_;
  }

 private:
  GaussianSpace space_;
  std::vector<ChaosPoly> comps_;
};

ChaosField operator+(const ChaosField& a, const ChaosField& b);
ChaosField operator-(const ChaosField& a, const ChaosField& b);
ChaosField operator*(double s, const ChaosField& v);

// Pointwise pairing sum_i u_i v_i as a ChaosPoly.
ChaosPoly field_pair(const ChaosField& u, const ChaosField& v, Overflow policy = Overflow::Error);

// Pointwise evaluation of all components.
std::vector<double> evaluate_field(const ChaosField& v, std::span<const double> x);

}  // namespace chaosflow
