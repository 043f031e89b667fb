#pragma once

#include <string>
#include <vector>

namespace tordust {

// One measured quantity against an acceptance window [lo, hi].  One-sided
// checks leave the unused side at the numeric extreme.
struct VerifyCheck {
  std::string name;
  double measured = 0;
  double lo = 0;
  double hi = 0;
  bool pass = false;
  std::string note;  // sub-measurements and context, human-oriented
};

// Release-gate criterion: a batch of checks and a wall-clock budget.
struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<VerifyCheck> checks;
  double wall_seconds = 0;
  double budget_seconds = 0;  // 0 = unbudgeted
  bool pass = false;          // all checks pass and the budget holds
};

struct SuiteReport {
  std::string suite;
  std::vector<CriterionResult> criteria;
  double wall_seconds = 0;
  bool pass = false;
};

inline constexpr int kNumCriteria = 9;

// suite names: background, identities, convergence, oracle, decay, stability, all
std::vector<std::string> verify_suite_names();

// criterion ids a suite covers, in execution order; throws invalid_argument
std::vector<int> verify_suite_criteria(const std::string& suite);

// runs one criterion end to end; never throws for a measured failure, only
// for an unknown id
CriterionResult verify_criterion(int id);

SuiteReport verify_suite(const std::string& suite);

std::string verify_report_json(const SuiteReport& report);
std::string verify_report_text(const SuiteReport& report);

}  // namespace tordust
