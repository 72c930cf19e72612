#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "chaosflow/chaos_field.hpp"

namespace chaosflow {

struct CheckResult {
  std::string name;
  std::string mode;  // "exact" or "mc"
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyOptions {
  std::uint64_t seed = 20240601;
  int cases = 200;
  long n_mc = 100000;
  int dim = 3;
  int cap = 6;
};

struct Report {
  std::string suite;
  nlohmann::json config;
  std::vector<CheckResult> checks;

  bool all_pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  nlohmann::json to_json() const;
};

const std::vector<std::string>& verify_suite_names();
Report run_verify_suite(const std::string& suite, const VerifyOptions& opts);

// Numerical check of the resolvent weight: integrates t^{beta-1} e^{-t} e^{-kt}
// / Gamma(beta) over (0, inf) by substitution + composite Simpson. Independent
// of the spectral code path.
double resolvent_weight_quadrature(double beta, int k);

// Seeded fields shared by the verification and acceptance suites.
// 4-dimensional field whose direction-k content decays geometrically, so
// Galerkin truncations converge through the m sequence; carries the 1/i
// weight profile.
ChaosField galerkin_test_field(std::uint64_t seed);
// 3-dimensional lower-triangular field (component i depends on directions <= i).
ChaosField adapted_test_field(std::uint64_t seed);

}  // namespace chaosflow
