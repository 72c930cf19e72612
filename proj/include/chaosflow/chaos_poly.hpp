#pragma once

#include <map>
#include <span>
#include <vector>

#include "chaosflow/gaussian_space.hpp"
#include "chaosflow/multi_index.hpp"

namespace chaosflow {

// Overflow policy for operations that can push total degree past the cap.
enum class Overflow {
  Error,     // throw DegreeOverflowError
  Truncate,  // silently drop terms beyond the cap
};

struct DegreeOverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Scalar random variable as a sparse map multi-index -> coefficient in the
// orthonormal Hermite basis. Canonical form: no stored zeros, deterministic
// (lexicographic) key order, every key within the space's degree cap, so
// equality of polynomials is equality of coefficient maps.
class ChaosPoly {
 public:
  explicit ChaosPoly(GaussianSpace space) : space_(std::move(space)) {}

  static ChaosPoly zero(const GaussianSpace& s) { return ChaosPoly(s); }

  static ChaosPoly constant(const GaussianSpace& s, double c) {
    ChaosPoly p(s);
    p.set(MultiIndex{}, c);
    return p;
  }

  // c * H_alpha
  static ChaosPoly hermite(const GaussianSpace& s, const MultiIndex& alpha, double c = 1.0) {
    ChaosPoly p(s);
    p.set(alpha, c);
    return p;
  }

  // The coordinate functional x_i = H_1(x_i), 0-based direction.
  static ChaosPoly coordinate(const GaussianSpace& s, int i) {
    if (i < 0 || i >= s.dim) throw std::out_of_range("ChaosPoly::coordinate: direction out of range");
    return hermite(s, MultiIndex::unit(i));
  }

  const GaussianSpace& space() const { return space_; }
  const std::map<MultiIndex, double>& coeffs() const { return coeffs_; }

  double coeff(const MultiIndex& alpha) const {
    auto it = coeffs_.find(alpha);
    return it == coeffs_.end() ? 0.0 : it->second;
  }

  // Canonicalizing write: drops exact zeros, validates direction range and cap.
  void set(const MultiIndex& alpha, double c);
  void add(const MultiIndex& alpha, double c);

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const;  // 0 for the zero polynomial
  double max_abs_coeff() const;
  double l2_norm_sq() const;

  friend bool operator==(const ChaosPoly& a, const ChaosPoly& b) {
    return a.space_ == b.space_ && a.coeffs_ == b.coeffs_;
  }

 private:
  GaussianSpace space_;
  std::map<MultiIndex, double> coeffs_;
};

// Coefficient-wise combination sum_k scale_k * poly_k. All terms must share a space.
ChaosPoly linear_combine(const std::vector<std::pair<double, const ChaosPoly*>>& terms);
ChaosPoly linear_combine(const std::vector<std::pair<double, ChaosPoly>>& terms);

ChaosPoly operator+(const ChaosPoly& a, const ChaosPoly& b);
ChaosPoly operator-(const ChaosPoly& a, const ChaosPoly& b);
ChaosPoly operator*(double s, const ChaosPoly& p);

// Exact product via the per-dimension Hermite linearization
//   h_m h_n = sum_k c(m,n,k) h_k,  c(m,n,k) = E[h_m h_n h_k].
ChaosPoly multiply(const ChaosPoly& a, const ChaosPoly& b, Overflow policy = Overflow::Error);

// Pointwise evaluation sum_alpha c_alpha prod_i h_{alpha_i}(x_i).
double evaluate(const ChaosPoly& p, std::span<const double> x);

double expectation(const ChaosPoly& p);  // coefficient at the zero index
double l2_inner(const ChaosPoly& a, const ChaosPoly& b);

void require_same_space(const GaussianSpace& a, const GaussianSpace& b, const char* what);

}  // namespace chaosflow
