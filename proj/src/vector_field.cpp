#include "chaosflow/vector_field.hpp"

#include <algorithm>
#include <cmath>

namespace chaosflow {

namespace {

bool registry_known(const std::string& name) {
  return name == "zero" || name == "rotation" || name == "double_rotation" || name == "tanh";
}

double sech2(double x) {
  double c = std::cosh(x);
  return 1.0 / (c * c);
}

}  // namespace

VectorFieldSpec VectorFieldSpec::chaos(ChaosField field, double t_begin, double t_end) {
  VectorFieldSpec spec;
  spec.kind_ = Kind::Chaos;
  spec.dim_ = field.dim();
  spec.t_begin_ = t_begin;
  spec.t_end_ = t_end;
  spec.nodes_ = {t_begin};
  spec.node_fields_.push_back(std::move(field));
  spec.prepare_chaos();
  return spec;
}

VectorFieldSpec VectorFieldSpec::chaos_nodes(std::vector<double> nodes,
                                             std::vector<ChaosField> fields) {
  if (nodes.size() != fields.size() || nodes.empty())
    throw std::invalid_argument("VectorFieldSpec: node/field count mismatch");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(nodes[i - 1] < nodes[i]))
      throw std::invalid_argument("VectorFieldSpec: time nodes must be strictly increasing");
  for (std::size_t i = 1; i < fields.size(); ++i)
    require_same_space(fields[0].space(), fields[i].space(), "VectorFieldSpec");
  VectorFieldSpec spec;
  spec.kind_ = Kind::Chaos;
  spec.dim_ = fields.front().dim();
  spec.t_begin_ = nodes.front();
  spec.t_end_ = nodes.back();
  spec.nodes_ = std::move(nodes);
  spec.node_fields_ = std::move(fields);
  spec.prepare_chaos();
  return spec;
}

VectorFieldSpec VectorFieldSpec::closed_form(const std::string& name, int dim, double t_begin,
                                             double t_end) {
  if (!registry_known(name)) throw std::invalid_argument("VectorFieldSpec: unknown registry field '" + name + "'");
  if (name == "rotation" && dim < 2) throw std::invalid_argument("rotation field needs dim >= 2");
  if (name == "double_rotation" && dim < 4)
    throw std::invalid_argument("double_rotation field needs dim >= 4");
  if (dim < 1) throw std::invalid_argument("VectorFieldSpec: dim must be >= 1");
  VectorFieldSpec spec;
  spec.kind_ = Kind::ClosedForm;
  spec.dim_ = dim;
  spec.t_begin_ = t_begin;
  spec.t_end_ = t_end;
  spec.name_ = name;
  spec.divergence_available_ = true;
  return spec;
}

void VectorFieldSpec::prepare_chaos() {
  divergence_available_ = true;
  node_divergences_.reserve(node_fields_.size());
  node_jacobians_.reserve(node_fields_.size());
  for (auto& f : node_fields_) {
    node_jacobians_.push_back(gradient_matrix(f));
    try {
      node_divergences_.push_back(divergence(f, Overflow::Error));
    } catch (const DegreeOverflowError&) {
      divergence_available_ = false;
      node_divergences_.clear();
      break;
    }
  }
}

const GaussianSpace& VectorFieldSpec::space() const {
  if (kind_ != Kind::Chaos) throw std::logic_error("VectorFieldSpec::space: not a chaos field");
  return node_fields_.front().space();
}

std::pair<std::size_t, double> VectorFieldSpec::bracket(double t) const {
  if (nodes_.size() == 1 || t <= nodes_.front()) return {0, 0.0};
  if (t >= nodes_.back()) return {nodes_.size() - 2, 1.0};
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  std::size_t k = std::size_t(it - nodes_.begin()) - 1;
  double lambda = (t - nodes_[k]) / (nodes_[k + 1] - nodes_[k]);
  return {k, lambda};
}

void VectorFieldSpec::value(double t, std::span<const double> x, std::span<double> out) const {
  if (int(x.size()) != dim_ || int(out.size()) != dim_)
    throw DimensionMismatchError("VectorFieldSpec::value: dimension mismatch");
  if (kind_ == Kind::ClosedForm) {
    std::fill(out.begin(), out.end(), 0.0);
    if (name_ == "zero") return;
    if (name_ == "rotation") {
      out[0] = -x[1];
      out[1] = x[0];
      return;
    }
    if (name_ == "double_rotation") {
      out[0] = -x[1];
      out[1] = x[0];
      out[2] = -x[3];
      out[3] = x[2];
      return;
    }
    // tanh
    out[0] = std::tanh(x[0]);
    return;
  }
  auto [k, lambda] = bracket(t);
  auto v0 = evaluate_field(node_fields_[k], x);
  if (lambda == 0.0) {
    std::copy(v0.begin(), v0.end(), out.begin());
    return;
  }
  auto v1 = evaluate_field(node_fields_[k + 1], x);
  for (int i = 0; i < dim_; ++i) out[i] = (1.0 - lambda) * v0[i] + lambda * v1[i];
}

double VectorFieldSpec::divergence_value(double t, std::span<const double> x) const {
  if (kind_ == Kind::ClosedForm) {
    if (name_ == "zero" || name_ == "rotation" || name_ == "double_rotation") return 0.0;
    return x[0] * std::tanh(x[0]) - sech2(x[0]);
  }
  if (!divergence_available_)
    throw std::domain_error("VectorFieldSpec: divergence not available (degree cap)");
  auto [k, lambda] = bracket(t);
  double d0 = evaluate(node_divergences_[k], x);
  if (lambda == 0.0) return d0;
  return (1.0 - lambda) * d0 + lambda * evaluate(node_divergences_[k + 1], x);
}

void VectorFieldSpec::jacobian(double t, std::span<const double> x, Mat& out) const {
  if (out.n != dim_) out = Mat(dim_);
  std::fill(out.a.begin(), out.a.end(), 0.0);
  if (kind_ == Kind::ClosedForm) {
    if (name_ == "zero") return;
    if (name_ == "rotation" || name_ == "double_rotation") {
      out(0, 1) = -1.0;
      out(1, 0) = 1.0;
      if (name_ == "double_rotation") {
        out(2, 3) = -1.0;
        out(3, 2) = 1.0;
      }
      return;
    }
    out(0, 0) = sech2(x[0]);
    return;
  }
  auto [k, lambda] = bracket(t);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      double g = evaluate(node_jacobians_[k].entry(i, j), x);
      if (lambda != 0.0)
        g = (1.0 - lambda) * g + lambda * evaluate(node_jacobians_[k + 1].entry(i, j), x);
      out(i, j) = g;
    }
}

ChaosPoly VectorFieldSpec::divergence_poly(double t) const {
  if (kind_ != Kind::Chaos) throw std::logic_error("divergence_poly: not a chaos field");
  if (!divergence_available_)
    throw std::domain_error("VectorFieldSpec: divergence not available (degree cap)");
  auto [k, lambda] = bracket(t);
  if (lambda == 0.0) return node_divergences_[k];
  return linear_combine(
      {{1.0 - lambda, &node_divergences_[k]}, {lambda, &node_divergences_[k + 1]}});
}

ChaosField VectorFieldSpec::field_at(double t) const {
  if (kind_ != Kind::Chaos) throw std::logic_error("field_at: not a chaos field");
  auto [k, lambda] = bracket(t);
  if (lambda == 0.0) return node_fields_[k];
  ChaosField out(node_fields_[k].space());
  for (int i = 0; i < dim_; ++i)
    out.set_component(i, linear_combine({{1.0 - lambda, &node_fields_[k].component(i)},
                                         {lambda, &node_fields_[k + 1].component(i)}}));
  return out;
}

bool VectorFieldSpec::has_closed_flow() const { return kind_ == Kind::ClosedForm; }

std::vector<double> VectorFieldSpec::closed_flow(double s, double t, std::span<const double> x) const {
  if (!has_closed_flow()) throw std::logic_error("closed_flow: not available");
  std::vector<double> y(x.begin(), x.end());
  double theta = t - s;
  if (name_ == "zero") return y;
  if (name_ == "rotation" || name_ == "double_rotation") {
    double c = std::cos(theta), sn = std::sin(theta);
    double y0 = c * x[0] - sn * x[1];
    double y1 = sn * x[0] + c * x[1];
    y[0] = y0;
    y[1] = y1;
    if (name_ == "double_rotation") {
      double y2 = c * x[2] - sn * x[3];
      double y3 = sn * x[2] + c * x[3];
      y[2] = y2;
      y[3] = y3;
    }
    return y;
  }
  // tanh: coordinate 1 follows sinh(x(t)) = e^theta sinh(x(0)).
  y[0] = std::asinh(std::exp(theta) * std::sinh(x[0]));
  return y;
}

bool VectorFieldSpec::has_analytic_density() const { return kind_ == Kind::ClosedForm; }

double VectorFieldSpec::analytic_log_density(double s, double t, std::span<const double> y) const {
  if (!has_analytic_density()) throw std::logic_error("analytic_log_density: not available");
  if (name_ != "tanh") return 0.0;  // the other registry fields are measure preserving
  double theta = t - s;
  double pre = std::asinh(std::exp(-theta) * std::sinh(y[0]));  // inverse flow of coordinate 1
  double dpre = std::exp(-theta) * std::cosh(y[0]) / std::cosh(pre);
  return 0.5 * (y[0] * y[0] - pre * pre) + std::log(dpre);
}

}  // namespace chaosflow
