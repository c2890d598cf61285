#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "krig/numeric_policy.hpp"

namespace krig::cli {

struct ModelOptions {
  std::string kind;
  std::optional<double> range;
  std::optional<double> sigma2;
  double nugget = 0.0;
};

// Parsed command line. String-valued fields hold the raw flag text; they
// are validated and decoded by run_command before any computation, so a
// bad flag never reaches the numerical layer.
struct RunConfig {
  std::string command;  // predict | mean | validate | simulate | stats
  std::string data_path;
  ModelOptions model;
  std::vector<std::string> targets;  // repeatable --target "x[,y[,z]]"
  std::string grid;                  // --grid "min:max:steps[,...]" per axis
  bool verbose = false;
  bool check = false;
  std::uint64_t seed = 0;
  std::uint64_t replicates = 10000;
  std::optional<std::uint64_t> n;
  std::string schedule;  // --schedule "n1,n2,..."
  double mean = 0.0;
  std::string layout = "unit_grid";
  std::string box;  // --box "lo:hi[,...]" per axis
  std::uint64_t budget = 100'000'000;
  std::string out_path;
};

// Dispatches the configured command, writing JSON-lines records to `out`
// (or to config.out_path when set) and warnings/errors as single-line JSON
// to `err`. Returns the process exit code: 0 success, 2 user or
// configuration error, 3 numerical error.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err,
                const NumericPolicy& policy = default_policy());

}  // namespace krig::cli
