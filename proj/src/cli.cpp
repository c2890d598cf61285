#include "krig/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <string_view>

#include "json.hpp"

#include "krig/correlation.hpp"
#include "krig/error.hpp"
#include "krig/io.hpp"
#include "krig/kriging.hpp"
#include "krig/mc.hpp"
#include "krig/mean_gls.hpp"

namespace krig::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

void emit_line(std::ostream& out, const ordered_json& record) {
  out << record.dump() << '\n';
}

std::string trim_copy(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(text.substr(start));
      break;
    }
    parts.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

double parse_real(const std::string& cell, const std::string& flag) {
  const std::string t = trim_copy(cell);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw Error(errc::invalid_argument,
                flag + ": cannot parse '" + cell + "' as a real number");
  }
  if (!std::isfinite(value)) {
    throw Error(errc::invalid_argument, flag + ": '" + cell + "' is not finite");
  }
  return value;
}

std::size_t parse_count(const std::string& cell, const std::string& flag) {
  const std::string t = trim_copy(cell);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() ||
      value == 0) {
    throw Error(errc::invalid_argument,
                flag + ": cannot parse '" + cell + "' as a positive count");
  }
  return static_cast<std::size_t>(value);
}

std::vector<double> parse_real_list(const std::string& text,
                                    const std::string& flag) {
  std::vector<double> values;
  for (const auto& part : split(text, ',')) {
    values.push_back(parse_real(part, flag));
  }
  return values;
}

CorrelationModel make_model(const ModelOptions& options) {
  ModelKind kind;
  try {
    kind = model_kind_from_string(options.kind);
  } catch (const Error&) {
    throw Error(errc::invalid_argument,
                "--model: unknown kind '" + options.kind +
                    "', expected white_noise, exponential, gaussian or "
                    "spherical");
  }
  if (!options.sigma2) {
    throw Error(errc::invalid_argument, "--sigma2: required");
  }
  if (!std::isfinite(*options.sigma2) || *options.sigma2 <= 0.0) {
    throw Error(errc::invalid_argument,
                "--sigma2: must be a positive finite real");
  }
  if (kind == ModelKind::white_noise) {
    if (options.range) {
      throw Error(errc::invalid_argument,
                  "--range: must not be given for model 'white_noise'");
    }
  } else {
    if (!options.range) {
      throw Error(errc::invalid_argument,
                  std::string("--range: required for model '") +
                      to_string(kind) + "'");
    }
    if (!std::isfinite(*options.range) || *options.range <= 0.0) {
      throw Error(errc::invalid_argument,
                  "--range: must be a positive finite real");
    }
  }
  if (!(options.nugget >= 0.0 && options.nugget < 1.0)) {
    throw Error(errc::invalid_argument, "--nugget: must lie in [0, 1)");
  }
  CorrelationModel model;
  model.kind = kind;
  model.range = options.range;
  model.sigma2 = *options.sigma2;
  model.nugget = options.nugget;
  model.validate();
  return model;
}

IngestResult load_data(const RunConfig& config, std::ostream& err) {
  if (config.data_path.empty()) {
    throw Error(errc::invalid_argument, "--data: required");
  }
  IngestResult data = ingest_csv(config.data_path);
  for (const auto& warning : data.warnings) {
    emit_line(err, ordered_json{{"warning", warning}});
  }
  return data;
}

std::vector<Location> parse_targets(const std::vector<std::string>& texts,
                                    std::size_t d) {
  std::vector<Location> targets;
  targets.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<double> coords = parse_real_list(text, "--target");
    if (coords.size() != d) {
      throw Error(errc::invalid_argument,
                  "--target: '" + text + "' has " +
                      std::to_string(coords.size()) +
                      " coordinates, expected " + std::to_string(d));
    }
    targets.emplace_back(std::move(coords));
  }
  return targets;
}

// Grid points in row-major order: the last axis varies fastest.
std::vector<Location> expand_grid(const std::string& text, std::size_t d) {
  struct Axis {
    double min, max;
    std::size_t steps;
  };
  const auto axis_texts = split(text, ',');
  if (axis_texts.size() != d) {
    throw Error(errc::invalid_argument,
                "--grid: has " + std::to_string(axis_texts.size()) +
                    " axes, expected " + std::to_string(d));
  }
  std::vector<Axis> axes;
  for (const auto& a : axis_texts) {
    const auto parts = split(a, ':');
    if (parts.size() != 3) {
      throw Error(errc::invalid_argument,
                  "--grid: axis '" + a + "' must be min:max:steps");
    }
    Axis axis{parse_real(parts[0], "--grid"), parse_real(parts[1], "--grid"),
              parse_count(parts[2], "--grid")};
    if (axis.steps == 1) {
      if (axis.max != axis.min) {
        throw Error(errc::invalid_argument,
                    "--grid: axis '" + a +
                        "' has steps=1, so min and max must coincide");
      }
    } else if (!(axis.max > axis.min)) {
      throw Error(errc::invalid_argument,
                  "--grid: axis '" + a + "' needs max > min");
    }
    axes.push_back(axis);
  }

  std::vector<Location> points;
  std::vector<std::size_t> index(d, 0);
  bool done = false;
  while (!done) {
    Location loc;
    loc.coords.reserve(d);
    for (std::size_t a = 0; a < d; ++a) {
      const Axis& axis = axes[a];
      loc.coords.push_back(axis.steps == 1
                               ? axis.min
                               : axis.min + (axis.max - axis.min) *
                                                static_cast<double>(index[a]) /
                                                static_cast<double>(axis.steps - 1));
    }
    points.push_back(std::move(loc));
    done = true;
    for (std::size_t a = d; a-- > 0;) {
      if (++index[a] < axes[a].steps) {
        done = false;
        break;
      }
      index[a] = 0;
    }
  }
  return points;
}

double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

int cmd_predict(const RunConfig& config, std::ostream& out, std::ostream& err,
                const NumericPolicy& policy) {
  const CorrelationModel model = make_model(config.model);
  const bool has_targets = !config.targets.empty();
  const bool has_grid = !config.grid.empty();
  if (has_targets == has_grid) {
    throw Error(errc::invalid_argument,
                "exactly one of --target and --grid is required");
  }
  const IngestResult data = load_data(config, err);
  const std::size_t d = data.samples.dim();
  const std::vector<Location> targets =
      has_targets ? parse_targets(config.targets, d)
                  : expand_grid(config.grid, d);
  for (const auto& target : targets) {
    const PredictionDetail detail =
        predict_detailed(model, data.samples, target, policy);
    ordered_json record{
        {"target", target.coords},
        {"estimate", detail.prediction.estimate},
        {"kriging_variance", detail.prediction.kriging_variance},
        {"estimator_variance", detail.prediction.estimator_variance},
    };
    if (config.verbose) {
      record["weights"] = std::vector<double>(detail.solution.weights.begin(),
                                              detail.solution.weights.end());
      record["lagrange"] = detail.solution.lagrange;
    }
    emit_line(out, record);
  }
  return 0;
}

int cmd_mean(const RunConfig& config, std::ostream& out, std::ostream& err,
             const NumericPolicy& policy) {
  const CorrelationModel model = make_model(config.model);
  const IngestResult data = load_data(config, err);
  const MeanEstimate primal = gls_mean(model, data.samples, policy);
  ordered_json record{
      {"mean", primal.mean},
      {"xi", primal.xi},
      {"mse", primal.mse},
      {"n", data.samples.size()},
  };
  if (config.check) {
    const MeanEstimate alt = gls_mean_via_kriging(model, data.samples, policy);
    double discrepancy =
        std::max({relative_gap(primal.mean, alt.mean),
                  relative_gap(primal.xi, alt.xi),
                  relative_gap(primal.mse, alt.mse)});
    for (Eigen::Index i = 0; i < primal.weights.size(); ++i) {
      discrepancy = std::max(
          discrepancy, relative_gap(primal.weights[i], alt.weights[i]));
    }
    record["check_discrepancy"] = discrepancy;
  }
  emit_line(out, record);
  return 0;
}

int cmd_validate(const RunConfig& config, std::ostream& out, std::ostream& err,
                 const NumericPolicy& policy) {
  const CorrelationModel model = make_model(config.model);
  const IngestResult data = load_data(config, err);
  const CrossValidationReport report =
      cross_validate(model, data.samples, policy);
  for (const auto& fold : report.folds) {
    if (fold.prediction) {
      emit_line(out, ordered_json{
                         {"held_out_index", fold.held_out_index},
                         {"estimate", fold.prediction->estimate},
                         {"kriging_variance", fold.prediction->kriging_variance},
                         {"estimator_variance",
                          fold.prediction->estimator_variance},
                         {"actual", fold.actual_value},
                         {"residual",
                          fold.prediction->estimate - fold.actual_value},
                     });
    } else {
      emit_line(out, ordered_json{{"held_out_index", fold.held_out_index},
                                  {"warning", fold.warning}});
    }
  }
  ordered_json summary;
  if (report.evaluated > 0) {
    summary["mean_squared_residual"] = report.mean_squared_residual;
    summary["mean_kriging_variance"] = report.mean_kriging_variance;
    if (report.mean_kriging_variance > 0.0) {
      summary["ratio"] =
          report.mean_squared_residual / report.mean_kriging_variance;
    } else {
      summary["ratio"] = nullptr;
    }
  } else {
    summary["mean_squared_residual"] = nullptr;
    summary["mean_kriging_variance"] = nullptr;
    summary["ratio"] = nullptr;
  }
  summary["folds_evaluated"] = report.evaluated;
  emit_line(out, summary);
  return 0;
}

mc::BoundingBox parse_box(const std::string& text) {
  mc::BoundingBox box;
  if (text.empty()) return box;
  const auto axis_texts = split(text, ',');
  if (axis_texts.size() > 3) {
    throw Error(errc::invalid_argument, "--box: at most 3 axes");
  }
  box.lo.clear();
  box.hi.clear();
  for (const auto& a : axis_texts) {
    const auto parts = split(a, ':');
    if (parts.size() != 2) {
      throw Error(errc::invalid_argument,
                  "--box: axis '" + a + "' must be lo:hi");
    }
    const double lo = parse_real(parts[0], "--box");
    const double hi = parse_real(parts[1], "--box");
    if (!(hi > lo)) {
      throw Error(errc::invalid_argument,
                  "--box: axis '" + a + "' needs hi > lo");
    }
    box.lo.push_back(lo);
    box.hi.push_back(hi);
  }
  return box;
}

ordered_json simulate_record(const mc::McReport& report, std::uint64_t seed,
                             const NumericPolicy& policy) {
  const double band = policy.mc_standard_errors;
  const bool pass_mse =
      std::abs(report.empirical_mse_prediction -
               report.analytic_kriging_variance) <=
      band * report.standard_error;
  const bool pass_estimator =
      std::abs(report.empirical_estimator_variance -
               report.analytic_estimator_variance) <=
      band * report.estimator_standard_error;
  return ordered_json{
      {"n", report.n},
      {"replicates", report.replicates},
      {"seed", seed},
      {"analytic_kriging_variance", report.analytic_kriging_variance},
      {"analytic_estimator_variance", report.analytic_estimator_variance},
      {"empirical_mse_prediction", report.empirical_mse_prediction},
      {"empirical_estimator_variance", report.empirical_estimator_variance},
      {"standard_error", report.standard_error},
      {"estimator_standard_error", report.estimator_standard_error},
      {"pass_mse", pass_mse},
      {"pass_estimator", pass_estimator},
  };
}

int cmd_simulate(const RunConfig& config, std::ostream& out,
                 const NumericPolicy& policy) {
  const CorrelationModel model = make_model(config.model);
  if (config.replicates == 0) {
    throw Error(errc::invalid_argument, "--replicates: must be at least 1");
  }
  if (config.budget == 0) {
    throw Error(errc::invalid_argument, "--budget: must be positive");
  }
  mc::SimulationConfig sim;
  sim.seed = config.seed;
  sim.replicates = config.replicates;
  sim.model = model;
  sim.mean = config.mean;
  try {
    sim.layout = mc::layout_from_string(config.layout);
  } catch (const Error&) {
    throw Error(errc::invalid_argument,
                "--layout: unknown layout '" + config.layout +
                    "', expected unit_grid or random_uniform");
  }
  sim.box = parse_box(config.box);
  sim.draw_budget = config.budget;

  const bool has_schedule = !config.schedule.empty();
  if (has_schedule == config.n.has_value()) {
    throw Error(errc::invalid_argument,
                "exactly one of --n and --schedule is required");
  }

  if (has_schedule) {
    if (!config.targets.empty()) {
      throw Error(errc::invalid_argument,
                  "--target: not allowed with --schedule (the target is "
                  "re-derived per schedule entry)");
    }
    std::vector<std::size_t> schedule;
    for (const auto& part : split(config.schedule, ',')) {
      schedule.push_back(parse_count(part, "--schedule"));
    }
    for (std::size_t i = 1; i < schedule.size(); ++i) {
      if (schedule[i] <= schedule[i - 1]) {
        throw Error(errc::invalid_argument,
                    "--schedule: entries must be strictly increasing");
      }
    }
    const std::vector<mc::McReport> reports =
        mc::verify_asymptotics(sim, schedule, policy);
    for (const auto& report : reports) {
      emit_line(out, simulate_record(report, config.seed, policy));
    }
    return 0;
  }

  if (*config.n == 0) {
    throw Error(errc::invalid_argument, "--n: must be at least 1");
  }
  sim.n = static_cast<std::size_t>(*config.n);
  const std::vector<Location> locations = mc::sample_locations(sim);
  Location target;
  if (!config.targets.empty()) {
    if (config.targets.size() > 1) {
      throw Error(errc::invalid_argument,
                  "--target: simulate takes at most one target");
    }
    target = parse_targets(config.targets, locations[0].dim())[0];
  } else {
    target = mc::default_target(locations);
  }
  const mc::McReport report =
      mc::verify_prediction_variance(sim, target, policy);
  emit_line(out, simulate_record(report, config.seed, policy));
  return 0;
}

int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const IngestResult data = load_data(config, err);
  const std::vector<double>& values = data.samples.values;
  if (values.size() < 2) {
    throw Error(errc::invalid_argument,
                "--data: stats needs at least 2 rows, got " +
                    std::to_string(values.size()));
  }
  const VarianceEstimate variance = sample_variance(values);
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) /
      static_cast<double>(values.size());
  emit_line(out, ordered_json{
                     {"n", values.size()},
                     {"mean", mean},
                     {"biased_variance", variance.biased},
                     {"unbiased_variance", variance.unbiased},
                 });
  return 0;
}

}  // namespace

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err,
                const NumericPolicy& policy) {
  try {
    std::ofstream file;
    std::ostream* sink = &out;
    if (!config.out_path.empty()) {
      file.open(config.out_path);
      if (!file) {
        throw Error(errc::io_error,
                    "--out: cannot open '" + config.out_path + "' for writing");
      }
      sink = &file;
    }
    if (config.command == "predict") return cmd_predict(config, *sink, err, policy);
    if (config.command == "mean") return cmd_mean(config, *sink, err, policy);
    if (config.command == "validate") return cmd_validate(config, *sink, err, policy);
    if (config.command == "simulate") return cmd_simulate(config, *sink, policy);
    if (config.command == "stats") return cmd_stats(config, *sink, err);
    throw Error(errc::invalid_argument,
                "unknown command '" + config.command + "'");
  } catch (const Error& e) {
    emit_line(err, ordered_json{{"error", errc_name(e.code())},
                                {"message", e.what()}});
    return e.is_user_error() ? 2 : 3;
  } catch (const std::exception& e) {
    emit_line(err, ordered_json{{"error", "internal"}, {"message", e.what()}});
    return 3;
  }
}

}  // namespace krig::cli
