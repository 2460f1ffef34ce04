#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cvk/numerics.hpp"

namespace cvk {

struct SuiteConfig {
  uint64_t seed = 1;
  int points = 10;                              // random draws for eigen checks
  std::vector<double> lambda_list = {6, 12, 24};
  int n_max = 2;                                // Askey-Wilson limit depth
  std::vector<int> k_list = {1, 2, 3, 4};
  QuadratureSettings quadrature{1e-10, 1e-13, 4000, 1.0, 1e-2};
  std::map<std::string, double> tolerances;     // per-check overrides

  void validate() const;
};

struct CheckResult {
  std::string name;
  std::string anchor;  // short phrase naming the identity being checked
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool skipped = false;
  long runtime_ms = 0;
  std::string error;  // populated when the check aborted
};

struct VerificationReport {
  std::string version;
  std::string config_digest;
  std::vector<CheckResult> checks;
  int passed = 0, failed = 0, skipped = 0;
};

enum class Suite { special, qseries, qaskey, fusion, confluent, limits, all };

Suite suite_from_name(const std::string& name);

// every check name belonging to a suite, in execution order
std::vector<std::string> check_names(Suite which);

// default tolerance of a named check
double default_tolerance(const std::string& check_name);

VerificationReport run_suite(const SuiteConfig& config, Suite which);

// JSON per the report schema {version, config_digest, checks[], summary}
std::string report_to_json(const VerificationReport& report, bool include_runtime = true);

std::string config_digest(const SuiteConfig& config);

}  // namespace cvk
