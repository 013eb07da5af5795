#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace sptq {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::vector<std::pair<std::string, double>> measured;
  std::vector<std::pair<std::string, double>> tolerance;
  std::string detail;
  double seconds = 0;
};

struct ValidateOptions {
  std::set<int> only;                // empty: all of 1..12
  std::map<int, double> tol_scale;   // test hook, multiplies each criterion's tolerances
  int threads = 1;
  std::function<void(const CriterionResult&)> on_result;
};

std::vector<CriterionResult> validate_suite(const ValidateOptions& opt = {});
CriterionResult run_criterion(int id, const ValidateOptions& opt);
std::string criterion_name(int id);

}  // namespace sptq
