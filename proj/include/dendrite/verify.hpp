#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace dendrite {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;  // key measurements, one line
  double seconds = 0;
};

// Acceptance criteria 1..11.
int criterion_count();
std::string criterion_title(int id);
CriterionResult run_criterion(int id);

// "all" (1..11), "exact" (1-6), "experiments" (7-10), "properties" (11), or a
// comma list of criterion numbers.
std::vector<int> suite_criteria(const std::string& suite);

// "PASS 3 closed-form energies [0.41 s] ..."
std::string format_result(const CriterionResult& r);

// Runs the listed criteria in order, printing one line each; returns true when all pass.
bool run_suite(const std::vector<int>& ids, std::ostream& os, std::vector<CriterionResult>* results = nullptr);

}  // namespace dendrite
