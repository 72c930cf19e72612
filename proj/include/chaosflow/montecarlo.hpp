#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace chaosflow {

// Counter-based uniform/normal generation: every draw is a pure function of
// (seed, counter), so any sample is addressable by index and estimates do not
// depend on how work is split across threads.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream);
double uniform_at(std::uint64_t seed, std::uint64_t counter);  // in (0,1)
double normal_at(std::uint64_t seed, std::uint64_t counter);   // standard normal

// N points in R^dim, row-major; entry (i,j) is a pure function of (seed, i*dim+j).
struct Batch {
  int dim = 0;
  long n = 0;
  std::vector<double> data;

  std::span<const double> row(long i) const {
    return std::span<const double>(data.data() + std::size_t(i) * dim, std::size_t(dim));
  }
};

Batch sample_gaussian(int dim, long n, std::uint64_t seed);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n = 0;
  std::uint64_t seed = 0;
};

// Mean and standard error of fn over the batch. Per-sample evaluation may be
// threaded; the reduction is always done serially in index order so the result
// is bit-identical for any worker count. Samples where fn throws or returns a
// non-finite value are counted as failures; the estimate is flagged invalid
// when they exceed 1% of the batch.
struct EstimateReport {
  Estimate est;
  long failures = 0;
  bool valid = true;
};

EstimateReport estimate(const std::function<double(std::span<const double>)>& fn, const Batch& batch,
                        int workers = 1);

Estimate mean_and_se(std::span<const double> values, std::uint64_t seed = 0);

// Two-sample Kolmogorov-Smirnov test.
struct KsResult {
  double statistic = 0.0;
  double threshold = 0.0;  // at the requested level
  bool reject = false;
};

KsResult two_sample_ks(std::vector<double> a, std::vector<double> b, double alpha);

}  // namespace chaosflow
