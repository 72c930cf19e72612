#include "chaosflow/chaos_poly.hpp"

#include <algorithm>
#include <cmath>

#include "chaosflow/hermite.hpp"

namespace chaosflow {

void require_same_space(const GaussianSpace& a, const GaussianSpace& b, const char* what) {
  if (!(a == b)) throw DimensionMismatchError(std::string(what) + ": operands live in different spaces");
}

void ChaosPoly::set(const MultiIndex& alpha, double c) {
  if (alpha.max_direction() >= space_.dim)
    throw std::out_of_range("ChaosPoly::set: direction beyond space dim");
  if (alpha.degree() > space_.degree_cap)
    throw DegreeOverflowError("ChaosPoly::set: degree beyond cap");
  if (c == 0.0)
    coeffs_.erase(alpha);
  else
    coeffs_[alpha] = c;
}

void ChaosPoly::add(const MultiIndex& alpha, double c) { set(alpha, coeff(alpha) + c); }

int ChaosPoly::degree() const {
  int d = 0;
  for (auto& [alpha, c] : coeffs_) d = std::max(d, alpha.degree());
  return d;
}

double ChaosPoly::max_abs_coeff() const {
  double m = 0.0;
  for (auto& [alpha, c] : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double ChaosPoly::l2_norm_sq() const {
  double s = 0.0;
  for (auto& [alpha, c] : coeffs_) s += c * c;
  return s;
}

ChaosPoly linear_combine(const std::vector<std::pair<double, const ChaosPoly*>>& terms) {
  if (terms.empty()) throw std::invalid_argument("linear_combine: empty term list");
  const GaussianSpace& space = terms.front().second->space();
  ChaosPoly out(space);
  for (auto& [scale, p] : terms) {
    require_same_space(space, p->space(), "linear_combine");
    for (auto& [alpha, c] : p->coeffs()) out.add(alpha, scale * c);
  }
  return out;
}

ChaosPoly linear_combine(const std::vector<std::pair<double, ChaosPoly>>& terms) {
  std::vector<std::pair<double, const ChaosPoly*>> ptrs;
  ptrs.reserve(terms.size());
  for (auto& [s, p] : terms) ptrs.emplace_back(s, &p);
  return linear_combine(ptrs);
}

ChaosPoly operator+(const ChaosPoly& a, const ChaosPoly& b) {
  return linear_combine({{1.0, &a}, {1.0, &b}});
}

ChaosPoly operator-(const ChaosPoly& a, const ChaosPoly& b) {
  return linear_combine({{1.0, &a}, {-1.0, &b}});
}

ChaosPoly operator*(double s, const ChaosPoly& p) { return linear_combine({{s, &p}}); }

namespace {

// Expand the product of two terms across dimensions, appending (index, weight)
// contributions. Recursive over the union of active directions.
void expand_term(const std::vector<std::pair<int, int>>& dims,  // (direction, (m,n) packed below)
                 const std::vector<std::pair<int, int>>& degs,  // per entry: (m_i, n_i)
                 std::size_t pos, const MultiIndex& partial, double weight, int cap,
                 Overflow policy, bool& overflowed, ChaosPoly& out) {
  if (pos == dims.size()) {
    out.add(partial, weight);
    return;
  }
  auto [direction, unused] = dims[pos];
  auto [m, n] = degs[pos];
  for (int k = std::abs(m - n); k <= m + n; k += 2) {
    double c = hermite_triple_product(m, n, k);
    if (c == 0.0) continue;
    MultiIndex next = partial.raised_by(direction, k);
    if (next.degree() > cap) {
      // Terms at this k and larger only grow; but mixed-dimension sums are not
      // monotone across k, so just skip this branch.
      if (policy == Overflow::Error) overflowed = true;
      continue;
    }
    expand_term(dims, degs, pos + 1, next, weight * c, cap, policy, overflowed, out);
  }
}

}  // namespace

ChaosPoly multiply(const ChaosPoly& a, const ChaosPoly& b, Overflow policy) {
  require_same_space(a.space(), b.space(), "multiply");
  const int cap = a.space().degree_cap;
  ChaosPoly out(a.space());
  bool overflowed = false;
  for (auto& [alpha, ca] : a.coeffs()) {
    for (auto& [beta, cb] : b.coeffs()) {
      // Union of active directions with per-direction degrees.
      std::vector<std::pair<int, int>> dims;
      std::vector<std::pair<int, int>> degs;
      std::size_t ia = 0, ib = 0;
      const auto& ta = alpha.terms();
      const auto& tb = beta.terms();
      while (ia < ta.size() || ib < tb.size()) {
        int da = ia < ta.size() ? ta[ia].first : INT32_MAX;
        int db = ib < tb.size() ? tb[ib].first : INT32_MAX;
        if (da < db) {
          dims.emplace_back(da, 0);
          degs.emplace_back(ta[ia].second, 0);
          ++ia;
        } else if (db < da) {
          dims.emplace_back(db, 0);
          degs.emplace_back(0, tb[ib].second);
          ++ib;
        } else {
          dims.emplace_back(da, 0);
          degs.emplace_back(ta[ia].second, tb[ib].second);
          ++ia;
          ++ib;
        }
      }
      expand_term(dims, degs, 0, MultiIndex{}, ca * cb, cap, policy, overflowed, out);
    }
  }
  if (overflowed && policy == Overflow::Error)
    throw DegreeOverflowError("multiply: product degree exceeds cap");
  return out;
}

double evaluate(const ChaosPoly& p, std::span<const double> x) {
  if (int(x.size()) != p.space().dim)
    throw DimensionMismatchError("evaluate: point dimension mismatch");
  const int cap = p.space().degree_cap;
  const int dim = p.space().dim;
  // Per-dimension Hermite values up to the cap, computed once.
  std::vector<double> table(std::size_t(dim) * (cap + 1));
  for (int i = 0; i < dim; ++i)
    hermite_values(cap, x[i], std::span<double>(table.data() + std::size_t(i) * (cap + 1), cap + 1));
  double acc = 0.0;
  for (auto& [alpha, c] : p.coeffs()) {
    double term = c;
    for (auto& [i, e] : alpha.terms()) term *= table[std::size_t(i) * (cap + 1) + e];
    acc += term;
  }
  return acc;
}

double expectation(const ChaosPoly& p) { return p.coeff(MultiIndex{}); }

double l2_inner(const ChaosPoly& a, const ChaosPoly& b) {
  require_same_space(a.space(), b.space(), "l2_inner");
  // Walk the smaller map.
  const ChaosPoly& small = a.coeffs().size() <= b.coeffs().size() ? a : b;
  const ChaosPoly& big = a.coeffs().size() <= b.coeffs().size() ? b : a;
  double s = 0.0;
  for (auto& [alpha, c] : small.coeffs()) s += c * big.coeff(alpha);
  return s;
}

}  // namespace chaosflow
