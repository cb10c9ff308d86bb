#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "svre/config.hpp"

namespace svre {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// The shipped Fig. 3-style experiment: affine bilinear n = d = 100, five
/// seeds, 2e4 passes, AltSGD / SVRE / restarted SVRE and their averages.
ExperimentConfig fig3_experiment();

// Individual checks. Each is deterministic and self-contained.
CheckResult check_thm1_enumeration();
CheckResult check_thm1_trajectory();
CheckResult check_thm1_batch_eg();
CheckResult check_eg_closed_form();
CheckResult check_gd_closed_form();
CheckResult check_thm2_bound();
CheckResult check_fig3(unsigned parallel = 0);
CheckResult check_estimator_unbiasedness();
CheckResult check_snapshot_fixed_point();
CheckResult check_refresh_frequency();
CheckResult check_policy_sequences();
CheckResult check_sme_recursion();
CheckResult check_geometric_mean();
/// Runs the Fig. 3 experiment serially twice and once in parallel into
/// scratch directories and compares every CSV byte for byte.
CheckResult check_reproducibility(unsigned parallel = 0);

std::vector<std::string> suite_names();
/// Throws ConfigError for an unknown suite.
std::vector<CheckResult> run_suite(const std::string& suite, unsigned parallel = 0);

std::string format_check(const CheckResult& r);

}  // namespace svre
