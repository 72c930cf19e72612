#include "chaosflow/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace chaosflow {

std::uint64_t mix64(std::uint64_t x) {
  // SplitMix64 finalizer.
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

double uniform_at(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = mix64(seed ^ mix64(counter));
  // 53-bit mantissa, shifted into (0,1).
  return (double(z >> 11) + 0.5) * 0x1.0p-53;
}

double normal_at(std::uint64_t seed, std::uint64_t counter) {
  double u1 = uniform_at(seed, 2 * counter);
  double u2 = uniform_at(seed, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Batch sample_gaussian(int dim, long n, std::uint64_t seed) {
  if (dim < 1 || n < 1) throw std::invalid_argument("sample_gaussian: need dim >= 1, n >= 1");
  Batch b;
  b.dim = dim;
  b.n = n;
  b.data.resize(std::size_t(n) * dim);
  for (long i = 0; i < n; ++i)
    for (int j = 0; j < dim; ++j)
      b.data[std::size_t(i) * dim + j] = normal_at(seed, std::uint64_t(i) * dim + j);
  return b;
}

Estimate mean_and_se(std::span<const double> values, std::uint64_t seed) {
  const long n = long(values.size());
  if (n < 1) throw std::invalid_argument("mean_and_se: empty sample");
  // Kahan summation in index order keeps the reduction deterministic.
  double sum = 0.0, comp = 0.0;
  for (double v : values) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  double mean = sum / double(n);
  double ss = 0.0, comp2 = 0.0;
  for (double v : values) {
    double d = (v - mean) * (v - mean) - comp2;
    double t = ss + d;
    comp2 = (t - ss) - d;
    ss = t;
  }
  double var = n > 1 ? ss / double(n - 1) : 0.0;
  return Estimate{mean, n > 1 ? std::sqrt(var / double(n)) : 0.0, n, seed};
}

EstimateReport estimate(const std::function<double(std::span<const double>)>& fn, const Batch& batch,
                        int workers) {
  const long n = batch.n;
  std::vector<double> values(n);
  std::vector<unsigned char> failed(n, 0);
  auto run = [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      double v;
      try {
        v = fn(batch.row(i));
      } catch (...) {
        failed[i] = 1;
        continue;
      }
      if (!std::isfinite(v)) {
        failed[i] = 1;
        continue;
      }
      values[i] = v;
    }
  };
  if (workers <= 1) {
    run(0, n);
  } else {
    std::vector<std::thread> pool;
    long chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      long lo = w * chunk, hi = std::min(n, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  std::vector<double> good;
  good.reserve(n);
  long failures = 0;
  for (long i = 0; i < n; ++i) {
    if (failed[i])
      ++failures;
    else
      good.push_back(values[i]);
  }
  EstimateReport rep;
  rep.failures = failures;
  rep.valid = failures * 100 <= n && !good.empty();
  rep.est = good.empty() ? Estimate{0, 0, 0, 0} : mean_and_se(good);
  rep.est.n = long(good.size());
  return rep;
}

KsResult two_sample_ks(std::vector<double> a, std::vector<double> b, double alpha) {
  if (a.empty() || b.empty()) throw std::invalid_argument("two_sample_ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = double(a.size()), nb = double(b.size());
  double d = 0.0, fa = 0.0, fb = 0.0;
  std::size_t ia = 0, ib = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] <= b[ib])
      fa = double(++ia) / na;
    else
      fb = double(++ib) / nb;
    d = std::max(d, std::abs(fa - fb));
  }
  KsResult r;
  r.statistic = d;
  double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  r.threshold = c * std::sqrt((na + nb) / (na * nb));
  r.reject = d > r.threshold;
  return r;
}

}  // namespace chaosflow
