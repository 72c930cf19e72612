#pragma once

#include <compare>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace chaosflow {

// Multi-index over basis directions, stored sparsely as (direction, exponent)
// pairs with exponent > 0, sorted by direction. Directions are 0-based.
// Comparison is by dense value, so interior/trailing zeros never matter.
class MultiIndex {
 public:
  MultiIndex() = default;

  static MultiIndex unit(int direction) {
    MultiIndex a;
    a.terms_.emplace_back(direction, 1);
    return a;
  }

  static MultiIndex from_dense(std::span<const int> exps) {
    MultiIndex a;
    for (int i = 0; i < int(exps.size()); ++i) {
      if (exps[i] < 0) throw std::invalid_argument("MultiIndex: negative exponent");
      if (exps[i] > 0) a.terms_.emplace_back(i, exps[i]);
    }
    return a;
  }

  int degree() const {
    int d = 0;
    for (auto& [i, e] : terms_) d += e;
    return d;
  }

  int exponent(int direction) const {
    for (auto& [i, e] : terms_)
      if (i == direction) return e;
    return 0;
  }

  bool empty() const { return terms_.empty(); }

  // Highest active direction, or -1 for the zero index.
  int max_direction() const { return terms_.empty() ? -1 : terms_.back().first; }

  // True when every active direction is < m (i.e. within the first m directions).
  bool supported_within(int m) const { return max_direction() < m; }

  MultiIndex raised(int direction) const { return shifted(direction, +1); }
  MultiIndex raised_by(int direction, int k) const { return k == 0 ? *this : shifted(direction, k); }
  MultiIndex lowered(int direction) const { return shifted(direction, -1); }

  std::vector<int> dense(int dim) const {
    std::vector<int> out(dim, 0);
    for (auto& [i, e] : terms_) {
      if (i >= dim) throw std::out_of_range("MultiIndex: direction beyond dim");
      out[i] = e;
    }
    return out;
  }

  const std::vector<std::pair<int, int>>& terms() const { return terms_; }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.terms_ == b.terms_; }

  // Lexicographic order on the dense expansion.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    std::size_t ia = 0, ib = 0;
    while (ia < a.terms_.size() && ib < b.terms_.size()) {
      auto [da, ea] = a.terms_[ia];
      auto [db, eb] = b.terms_[ib];
      if (da < db) return std::strong_ordering::greater;  // a has nonzero where b has zero
      if (db < da) return std::strong_ordering::less;
      if (ea != eb) return ea <=> eb;
      ++ia;
      ++ib;
    }
    if (ia < a.terms_.size()) return std::strong_ordering::greater;
    if (ib < b.terms_.size()) return std::strong_ordering::less;
    return std::strong_ordering::equal;
  }

 private:
  MultiIndex shifted(int direction, int delta) const {
    if (direction < 0) throw std::out_of_range("MultiIndex: negative direction");
    MultiIndex out;
    out.terms_.reserve(terms_.size() + 1);
    bool placed = false;
    for (auto& [i, e] : terms_) {
      if (i == direction) {
        int ne = e + delta;
        if (ne < 0) throw std::invalid_argument("MultiIndex: lowering a zero exponent");
        if (ne > 0) out.terms_.emplace_back(i, ne);
        placed = true;
      } else {
        if (!placed && i > direction) {
          if (delta < 0) throw std::invalid_argument("MultiIndex: lowering a zero exponent");
          out.terms_.emplace_back(direction, delta);
          placed = true;
        }
        out.terms_.emplace_back(i, e);
      }
    }
    if (!placed) {
      if (delta < 0) throw std::invalid_argument("MultiIndex: lowering a zero exponent");
      out.terms_.emplace_back(direction, delta);
    }
    return out;
  }

  std::vector<std::pair<int, int>> terms_;
};

}  // namespace chaosflow
