#include <cstdint>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "krig/cli.hpp"
#include "krig/error.hpp"
#include "krig/numeric_policy.hpp"

namespace {

// Flags shared by every command that runs the correlation model.
void add_model_options(CLI::App* cmd, krig::cli::RunConfig& config) {
  cmd->add_option("--model", config.model.kind,
                  "correlation model: white_noise, exponential, gaussian or "
                  "spherical")
      ->required();
  cmd->add_option("--range", config.model.range,
                  "correlation range (required for every model except "
                  "white_noise)");
  cmd->add_option("--sigma2", config.model.sigma2, "field variance");
  cmd->add_option("--nugget", config.model.nugget,
                  "fraction of correlation removed at nonzero distance, in "
                  "[0, 1)");
}

void add_data_option(CLI::App* cmd, krig::cli::RunConfig& config) {
  cmd->add_option("--data", config.data_path,
                  "CSV file with header and columns x[,y[,z]],value")
      ->required();
}

void add_out_option(CLI::App* cmd, krig::cli::RunConfig& config) {
  cmd->add_option("--out", config.out_path,
                  "write JSON-lines output here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  krig::cli::RunConfig config;

  CLI::App app{
      "kriging point prediction, generalized-least-squares mean estimation "
      "and Monte Carlo verification over CSV sample data"};
  app.require_subcommand(1);

  CLI::App* predict = app.add_subcommand(
      "predict", "kriging prediction at explicit targets or on a grid");
  add_data_option(predict, config);
  add_model_options(predict, config);
  add_out_option(predict, config);
  predict->add_option("--target", config.targets,
                      "target coordinates 'x[,y[,z]]' (repeatable)");
  predict->add_option("--grid", config.grid,
                      "one 'min:max:steps' per axis, comma-separated; "
                      "points are emitted in row-major order");
  predict->add_flag("--verbose", config.verbose,
                    "include weights and the Lagrange multiplier");

  CLI::App* mean = app.add_subcommand(
      "mean", "generalized-least-squares estimate of the field mean");
  add_data_option(mean, config);
  add_model_options(mean, config);
  add_out_option(mean, config);
  mean->add_flag("--check", config.check,
                 "cross-check against the augmented-system path and report "
                 "the discrepancy");

  CLI::App* validate = app.add_subcommand(
      "validate", "leave-one-out cross-validation of the model");
  add_data_option(validate, config);
  add_model_options(validate, config);
  add_out_option(validate, config);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo check of the analytic variances");
  add_model_options(simulate, config);
  add_out_option(simulate, config);
  simulate->add_option("--seed", config.seed, "random seed");
  simulate->add_option("--replicates", config.replicates,
                       "Monte Carlo replicates per report");
  simulate->add_option("--n", config.n, "sample count");
  simulate->add_option("--schedule", config.schedule,
                       "comma-separated increasing sample counts; one report "
                       "per entry (mutually exclusive with --n)");
  simulate->add_option("--target", config.targets,
                       "prediction target 'x[,y[,z]]' (default: centroid of "
                       "the samples shifted by 0.25 per axis)");
  simulate->add_option("--mean", config.mean, "field mean of the simulation");
  simulate->add_option("--layout", config.layout,
                       "sample layout: unit_grid or random_uniform");
  simulate->add_option("--box", config.box,
                       "bounding box 'lo:hi' per axis, comma-separated; its "
                       "axis count sets the dimension");
  simulate->add_option("--budget", config.budget,
                       "cap on replicates times locations");

  CLI::App* stats = app.add_subcommand(
      "stats", "sample mean and the 1/n and 1/(n-1) variance estimators");
  add_data_option(stats, config);
  add_out_option(stats, config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    std::cout << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    nlohmann::ordered_json record{{"error", "invalid_argument"},
                                  {"message", e.what()}};
    std::cerr << record.dump() << '\n';
    return 2;
  }

  config.command = app.get_subcommands().front()->get_name();

  krig::NumericPolicy policy;
  try {
    policy = krig::policy_from_env();
  } catch (const krig::Error& e) {
    nlohmann::ordered_json record{{"error", krig::errc_name(e.code())},
                                  {"message", e.what()}};
    std::cerr << record.dump() << '\n';
    return e.is_user_error() ? 2 : 3;
  }

  return krig::cli::run_command(config, std::cout, std::cerr, policy);
}
