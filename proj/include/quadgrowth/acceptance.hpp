#pragma once

#include <string>
#include <vector>

namespace qg {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string summary;              // key numbers, or the first failure
  std::vector<std::string> detail;  // one line per sub-check
  double seconds = 0;
  std::string line() const;         // one pass/fail line
};

inline constexpr int kCriteria = 10;

CriterionResult run_criterion(int id, bool parallel = true);

// chi-square p-value with expected counts below 5 pooled into one bin
double chi_square_pvalue(const std::vector<double>& probs, const std::vector<long>& observed, long n);

}  // namespace qg
