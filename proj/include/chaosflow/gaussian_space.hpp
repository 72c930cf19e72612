#pragma once

#include <stdexcept>
#include <vector>

namespace chaosflow {

// The ambient n-dimensional standard Gaussian space: basis directions e_1..e_n,
// a hard cap on total Hermite degree, and an optional positive weight profile
// q_1..q_n defining the surrogate norm |x|_W = |Q x| with Q = diag(q_i).
struct GaussianSpace {
  int dim = 1;
  int degree_cap = 1;
  std::vector<double> weights;  // empty when no weighted norm is configured

  GaussianSpace(int dim_, int degree_cap_) : dim(dim_), degree_cap(degree_cap_) { validate(); }
  GaussianSpace(int dim_, int degree_cap_, std::vector<double> weights_)
      : dim(dim_), degree_cap(degree_cap_), weights(std::move(weights_)) {
    validate();
  }

  bool has_weights() const { return !weights.empty(); }

  friend bool operator==(const GaussianSpace&, const GaussianSpace&) = default;

 private:
  void validate() const {
    if (dim < 1) throw std::invalid_argument("GaussianSpace: dim must be >= 1");
    if (degree_cap < 1) throw std::invalid_argument("GaussianSpace: degree_cap must be >= 1");
    // Linearization constants are exact integers in uint64 only up to this cap.
    if (degree_cap > 20) throw std::invalid_argument("GaussianSpace: degree_cap > 20 unsupported");
    if (!weights.empty()) {
      if (int(weights.size()) != dim)
        throw std::invalid_argument("GaussianSpace: weights length must equal dim");
      for (double q : weights)
        if (!(q > 0.0)) throw std::invalid_argument("GaussianSpace: weights must be positive");
    }
  }
};

}  // namespace chaosflow
