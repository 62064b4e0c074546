#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rlab/convolution.hpp"
#include "rlab/report_io.hpp"

namespace rlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string expected;
  std::string actual;
  std::string tolerance;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

struct AcceptanceOptions {
  /// Reduced sample counts and resolutions.
  bool quick = false;
  Backend backend = Backend::parallel;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

/// Runs criteria 1..10 in order. A criterion passes only if its checks hold and it
/// finished within its time budget; exceptions count as failures.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, const CriterionCallback& on_result = {});

/// One line: verdict, id, name, expected, actual, tolerance, time.
std::string format_result(const CriterionResult& r);

json to_json(const CriterionResult& r);

}  // namespace rlab
