#pragma once

#include <optional>
#include <string>

#include "chaosflow/linalg.hpp"
#include "chaosflow/malliavin.hpp"
#include "chaosflow/operator_calculus.hpp"

namespace chaosflow {

// Time-dependent vector field: either chaos expansions on a time grid with
// piecewise-linear coefficient interpolation, or a named closed-form field
// from the registry ("zero", "rotation", "double_rotation", "tanh").
class VectorFieldSpec {
 public:
  enum class Kind { Chaos, ClosedForm };

  static VectorFieldSpec chaos(ChaosField field, double t_begin = 0.0, double t_end = 1.0);
  static VectorFieldSpec chaos_nodes(std::vector<double> nodes, std::vector<ChaosField> fields);
  static VectorFieldSpec closed_form(const std::string& name, int dim, double t_begin = 0.0,
                                     double t_end = 1.0);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  bool autonomous() const { return kind_ == Kind::ClosedForm || nodes_.size() == 1; }
  const std::string& name() const { return name_; }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<ChaosField>& node_fields() const { return node_fields_; }
  const GaussianSpace& space() const;  // chaos kind only

  bool divergence_available() const { return divergence_available_; }

  void value(double t, std::span<const double> x, std::span<double> out) const;
  double divergence_value(double t, std::span<const double> x) const;
  void jacobian(double t, std::span<const double> x, Mat& out) const;

  // Divergence as a chaos polynomial at time t (chaos kind only).
  ChaosPoly divergence_poly(double t) const;
  ChaosField field_at(double t) const;  // chaos kind only (interpolated)

  // Closed-form flow map and pushforward log-density where the registry has them.
  bool has_closed_flow() const;
  std::vector<double> closed_flow(double s, double t, std::span<const double> x) const;
  bool has_analytic_density() const;
  double analytic_log_density(double s, double t, std::span<const double> y) const;

 private:
  VectorFieldSpec() = default;
  void prepare_chaos();
  std::pair<std::size_t, double> bracket(double t) const;

  Kind kind_ = Kind::ClosedForm;
  int dim_ = 0;
  double t_begin_ = 0.0, t_end_ = 1.0;
  std::string name_;

  std::vector<double> nodes_;
  std::vector<ChaosField> node_fields_;
  std::vector<ChaosPoly> node_divergences_;
  std::vector<ChaosMatrix> node_jacobians_;
  bool divergence_available_ = false;
};

}  // namespace chaosflow
