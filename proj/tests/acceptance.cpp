// Acceptance run: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "svre/verify.hpp"

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<std::vector<svre::CheckResult>()> checks;
};

}  // namespace

int main() {
  using namespace svre;
  const std::vector<Criterion> criteria = {
      {1, "SEG exact one-step factor", [] { return std::vector{check_thm1_enumeration()}; }},
      {2, "SEG trajectory rate and batch EG convergence",
       [] { return std::vector{check_thm1_trajectory(), check_thm1_batch_eg()}; }},
      {3, "Fig. 3 qualitative reproduction", [] { return std::vector{check_fig3()}; }},
      {4, "SVRE contraction bound respected", [] { return std::vector{check_thm2_bound()}; }},
      {5, "estimator algebra",
       [] {
         return std::vector{check_estimator_unbiasedness(), check_snapshot_fixed_point(), check_refresh_frequency()};
       }},
      {6, "EG and GD closed forms", [] { return std::vector{check_eg_closed_form(), check_gd_closed_form()}; }},
      {7, "step-size policies, SME, epoch lengths",
       [] { return std::vector{check_policy_sequences(), check_sme_recursion(), check_geometric_mean()}; }},
      {8, "reproducibility", [] { return std::vector{check_reproducibility()}; }},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    std::vector<CheckResult> results;
    try {
      results = c.checks();
    } catch (const std::exception& e) {
      results.push_back({c.title, false, std::string("exception: ") + e.what(), 0.0});
    }
    bool ok = true;
    std::string detail;
    for (const CheckResult& r : results) {
      ok = ok && r.passed;
      detail += fmt::format("{}[{}] {}: {}", detail.empty() ? "" : " | ", r.passed ? "ok" : "fail", r.name, r.detail);
    }
    if (!ok) ++failed;
    fmt::print("criterion {} {}: {} :: {}\n", c.id, ok ? "PASS" : "FAIL", c.title, detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
