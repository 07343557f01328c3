#pragma once

// The acceptance suite: every criterion with its oracle, tolerance and time
// budget. Shared by `cubewaring verify` and the acceptance test binary.

#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace cubewaring::verify {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id = 0;
  std::string name;
  double budget_seconds = 0;
  std::function<Outcome()> run;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0;
  double budget_seconds = 0;
  std::string detail;

  [[nodiscard]] bool within_budget() const { return seconds < budget_seconds; }
  [[nodiscard]] bool ok() const { return passed && within_budget(); }
};

const std::vector<Criterion>& criteria();

// Runs one criterion; an exception counts as a failure with its message.
CriterionResult run(const Criterion& c);

// All criteria, or only those whose id is listed.
std::vector<CriterionResult> run_all(std::span<const int> only = {});

// One line per criterion: PASS/FAIL, id, name, time against budget, detail.
void print_line(std::ostream& out, const CriterionResult& r);

nlohmann::json to_json(std::span<const CriterionResult> results);

}  // namespace cubewaring::verify
