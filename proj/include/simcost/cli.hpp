#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "simcost/config.hpp"

namespace simcost {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitAssumption = 2, kExitSolver = 3 };

class AssumptionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SimRow {
  double t = 0.0;
  std::optional<int> N;
  double error = 0.0;
  double bound = 0.0;
  long depth = 0;
  double ratio() const { return bound > 0.0 ? error / bound : (error > 0.0 ? INFINITY : 0.0); }
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t rows = 0;
};

struct RunReport {
  std::string model;
  std::string scheme;
  std::vector<SimRow> rows;
  std::optional<FitResult> fit;
  std::map<std::string, double> seconds;
};

const std::vector<std::string>& scheme_names();

// Sweep rows in grid order; `workers` threads evaluate points independently.
RunReport cmd_simulate(const ModelConfig& cfg, const std::string& scheme, int workers);
std::string rows_to_csv(const RunReport& r);

struct BoundOutput {
  BoundReport report;
  AssumptionReport assumptions;
  CompatibilityResult compatibility;
  MixingResult mixing;
  std::vector<std::string> warnings;
};

// kind: uniform | fixed-time | fixed-precision
BoundOutput cmd_bound(const ModelConfig& cfg, const std::string& kind, bool force);
std::string bound_text(const BoundOutput& b);
std::string bound_json(const BoundOutput& b);

FitResult fit_loglog(const std::vector<double>& x, const std::vector<double>& y);
FitResult cmd_fit(const std::string& csv_path, const std::string& x_col, const std::string& y_col);

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  std::string detail;
};
std::vector<VerifyCheck> cmd_verify(const ModelConfig& cfg);

int default_workers();
int run_cli(int argc, char** argv);

}  // namespace simcost
