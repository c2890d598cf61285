#include "krig/mc.hpp"

#include <cmath>
#include <sstream>

#include "krig/error.hpp"

namespace krig::mc {

Layout layout_from_string(const std::string& name) {
  if (name == "unit_grid") return Layout::unit_grid;
  if (name == "random_uniform") return Layout::random_uniform;
  throw Error(errc::invalid_argument,
              "unknown layout '" + name +
                  "' (expected unit_grid or random_uniform)");
}

const char* to_string(Layout layout) {
  switch (layout) {
    case Layout::unit_grid: return "unit_grid";
    case Layout::random_uniform: return "random_uniform";
  }
  return "unknown";
}

void BoundingBox::validate() const {
  if (lo.size() != hi.size()) {
    throw_dimension_mismatch(lo.size(), hi.size(), "bounding box");
  }
  if (lo.empty() || lo.size() > 3) {
    throw Error(errc::invalid_argument,
                "bounding box dimension must be 1, 2 or 3, got " +
                    std::to_string(lo.size()));
  }
  for (std::size_t a = 0; a < lo.size(); ++a) {
    if (!std::isfinite(lo[a]) || !std::isfinite(hi[a]) || !(lo[a] < hi[a])) {
      throw Error(errc::invalid_argument,
                  "bounding box axis " + std::to_string(a) +
                      " must satisfy lo < hi with finite bounds");
    }
  }
}

void SimulationConfig::validate() const {
  model.validate();
  box.validate();
  if (replicates < 1) {
    throw Error(errc::invalid_argument, "replicates must be at least 1");
  }
  if (n < 1) {
    throw Error(errc::invalid_argument, "sample count n must be at least 1");
  }
  if (!std::isfinite(mean)) {
    throw Error(errc::invalid_argument, "mean must be finite");
  }
  if (draw_budget < 1) {
    throw Error(errc::invalid_argument, "draw budget must be at least 1");
  }
}

namespace detail {

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace detail

namespace {

void check_budget(const SimulationConfig& config, std::size_t locations) {
  // Guard the product against overflow before comparing to the budget.
  if (locations != 0 &&
      config.replicates > config.draw_budget / locations) {
    std::ostringstream msg;
    msg << "replicates * locations = " << config.replicates << " * "
        << locations << " exceeds the draw budget " << config.draw_budget;
    throw Error(errc::budget_exceeded, msg.str());
  }
}

// Shared sampling machinery: one Cholesky factorization over the unique
// locations, then one row of draws per replicate. Coincident locations map
// to the same underlying draw.
class FieldSampler {
 public:
  FieldSampler(const SimulationConfig& config,
               const std::vector<Location>& locations)
      : seed_(config.seed), mean_(config.mean),
        sigma_(std::sqrt(config.model.sigma2)) {
    if (locations.empty()) {
      throw Error(errc::invalid_argument,
                  "simulate_field requires at least one location");
    }
    const std::size_t d = locations[0].dim();
    for (const Location& loc : locations) {
      if (loc.dim() != d) {
        throw_dimension_mismatch(d, loc.dim(), "simulation location");
      }
    }

    representative_.reserve(locations.size());
    std::vector<Location> unique;
    for (const Location& loc : locations) {
      std::size_t index = unique.size();
      for (std::size_t u = 0; u < unique.size(); ++u) {
        if (same_location(unique[u], loc)) {
          index = u;
          break;
        }
      }
      if (index == unique.size()) unique.push_back(loc);
      representative_.push_back(index);
    }

    unique_count_ = unique.size();
    white_noise_ = config.model.kind == ModelKind::white_noise;
    if (!white_noise_) {
      const Eigen::MatrixXd correlation =
          correlation_matrix(config.model, unique);
      Eigen::LLT<Eigen::MatrixXd> llt(correlation);
      if (llt.info() != Eigen::Success) {
        throw Error(errc::not_positive_definite,
                    "correlation matrix over the requested locations is not "
                    "positive definite; the model/layout combination is "
                    "invalid");
      }
      cholesky_ = llt.matrixL();
    }
  }

  std::size_t columns() const { return representative_.size(); }

  // Fills `row` (size columns()) with replicate r.
  void draw(std::size_t replicate, Eigen::VectorXd& row,
            Eigen::VectorXd& scratch) const {
    auto rng = detail::substream(seed_, 1 + replicate);
    std::normal_distribution<double> normal(0.0, 1.0);
    scratch.resize(static_cast<Eigen::Index>(unique_count_));
    for (Eigen::Index k = 0; k < scratch.size(); ++k) {
      scratch(k) = normal(rng);
    }
    if (!white_noise_) {
      scratch = (cholesky_.triangularView<Eigen::Lower>() * scratch).eval();
    }
    row.resize(static_cast<Eigen::Index>(columns()));
    for (std::size_t c = 0; c < representative_.size(); ++c) {
      row(static_cast<Eigen::Index>(c)) =
          mean_ + sigma_ * scratch(static_cast<Eigen::Index>(representative_[c]));
    }
  }

 private:
  std::uint64_t seed_;
  double mean_;
  double sigma_;
  bool white_noise_ = false;  // identity correlation over unique locations
  std::size_t unique_count_ = 0;
  std::vector<std::size_t> representative_;
  Eigen::MatrixXd cholesky_;
};

}  // namespace

std::vector<Location> sample_locations(const SimulationConfig& config) {
  config.validate();
  const std::size_t d = config.box.dim();
  std::vector<Location> locs;
  locs.reserve(config.n);

  if (config.layout == Layout::unit_grid) {
    // Integer lattice anchored at the origin, side ceil(n^(1/d)),
    // row-major with the last axis fastest.
    std::size_t side = 1;
    auto volume = [d](std::size_t s) {
      std::size_t v = 1;
      for (std::size_t a = 0; a < d; ++a) v *= s;
      return v;
    };
    while (volume(side) < config.n) ++side;
    std::vector<std::size_t> index(d, 0);
    for (std::size_t i = 0; i < config.n; ++i) {
      Location loc;
      loc.coords.resize(d);
      for (std::size_t a = 0; a < d; ++a) {
        loc.coords[a] = static_cast<double>(index[a]);
      }
      locs.push_back(std::move(loc));
      for (std::size_t a = d; a-- > 0;) {
        if (++index[a] < side) break;
        index[a] = 0;
      }
    }
  } else {
    auto rng = detail::substream(config.seed, 0);
    std::vector<std::uniform_real_distribution<double>> axis;
    axis.reserve(d);
    for (std::size_t a = 0; a < d; ++a) {
      axis.emplace_back(config.box.lo[a], config.box.hi[a]);
    }
    for (std::size_t i = 0; i < config.n; ++i) {
      Location loc;
      loc.coords.resize(d);
      for (std::size_t a = 0; a < d; ++a) {
        loc.coords[a] = axis[a](rng);
      }
      locs.push_back(std::move(loc));
    }
  }
  return locs;
}

Location default_target(const std::vector<Location>& locs) {
  if (locs.empty()) {
    throw Error(errc::invalid_argument,
                "default_target requires at least one location");
  }
  const std::size_t d = locs[0].dim();
  Location target;
  target.coords.assign(d, 0.0);
  for (const Location& loc : locs) {
    for (std::size_t a = 0; a < d; ++a) target.coords[a] += loc.coords[a];
  }
  for (std::size_t a = 0; a < d; ++a) {
    target.coords[a] = target.coords[a] / static_cast<double>(locs.size()) + 0.25;
  }
  return target;
}

Eigen::MatrixXd simulate_field(const SimulationConfig& config,
                               const std::vector<Location>& locations) {
  config.validate();
  check_budget(config, locations.size());
  const FieldSampler sampler(config, locations);

  Eigen::MatrixXd out(static_cast<Eigen::Index>(config.replicates),
                      static_cast<Eigen::Index>(locations.size()));
  Eigen::VectorXd row, scratch;
  for (std::size_t r = 0; r < config.replicates; ++r) {
    sampler.draw(r, row, scratch);
    out.row(static_cast<Eigen::Index>(r)) = row;
  }
  return out;
}

McReport verify_prediction_variance(const SimulationConfig& config,
                                    const Location& target,
                                    const NumericPolicy& policy) {
  config.validate();
  const std::vector<Location> locs = sample_locations(config);
  if (target.dim() != locs[0].dim()) {
    throw_dimension_mismatch(locs[0].dim(), target.dim(), "target location");
  }

  // Analytic quantities come from kriging_core; the variances do not
  // depend on the observed values, so zeros serve as placeholders.
  SampleSet placeholder{locs, std::vector<double>(config.n, 0.0)};
  const PredictionDetail detail_result =
      predict_detailed(config.model, placeholder, target, policy);
  const Eigen::VectorXd& weights = detail_result.solution.weights;

  std::vector<Location> all = locs;
  all.push_back(target);
  check_budget(config, all.size());
  const FieldSampler sampler(config, all);

  const auto n = static_cast<Eigen::Index>(config.n);
  double sum_d2 = 0.0, sumsq_d2 = 0.0;
  double sum_e2 = 0.0, sumsq_e2 = 0.0;
  Eigen::VectorXd row, scratch;
  for (std::size_t r = 0; r < config.replicates; ++r) {
    sampler.draw(r, row, scratch);
    const double v_j = row(n);
    const double v_hat = weights.dot(row.head(n));
    const double d2 = (v_j - v_hat) * (v_j - v_hat);
    const double e2 = (v_hat - config.mean) * (v_hat - config.mean);
    sum_d2 += d2;
    sumsq_d2 += d2 * d2;
    sum_e2 += e2;
    sumsq_e2 += e2 * e2;
  }

  const auto replicates = static_cast<double>(config.replicates);
  const auto standard_error_of_mean = [replicates](double sum, double sumsq) {
    if (replicates < 2) return 0.0;
    const double mean = sum / replicates;
    const double var =
        std::max(0.0, (sumsq - replicates * mean * mean) / (replicates - 1.0));
    return std::sqrt(var / replicates);
  };

  McReport report;
  report.empirical_mse_prediction = sum_d2 / replicates;
  report.empirical_estimator_variance = sum_e2 / replicates;
  report.analytic_kriging_variance =
      detail_result.prediction.kriging_variance;
  report.analytic_estimator_variance =
      detail_result.prediction.estimator_variance;
  report.standard_error = standard_error_of_mean(sum_d2, sumsq_d2);
  report.estimator_standard_error = standard_error_of_mean(sum_e2, sumsq_e2);
  report.replicates = config.replicates;
  report.n = config.n;
  return report;
}

std::vector<McReport> verify_asymptotics(const SimulationConfig& base_config,
                                         const std::vector<std::size_t>& n_schedule,
                                         const NumericPolicy& policy) {
  if (n_schedule.empty()) {
    throw Error(errc::invalid_argument, "the n schedule must not be empty");
  }
  for (std::size_t k = 1; k < n_schedule.size(); ++k) {
    if (!(n_schedule[k - 1] < n_schedule[k])) {
      throw Error(errc::invalid_argument,
                  "the n schedule must be strictly increasing");
    }
  }

  std::vector<McReport> reports;
  reports.reserve(n_schedule.size());
  for (std::size_t n : n_schedule) {
    SimulationConfig config = base_config;
    config.n = n;
    const std::vector<Location> locs = sample_locations(config);
    reports.push_back(
        verify_prediction_variance(config, default_target(locs), policy));
  }

  // Post-contract: the estimator variance must not increase along the
  // schedule beyond the trend band.
  for (std::size_t k = 1; k < reports.size(); ++k) {
    const McReport& prev = reports[k - 1];
    const McReport& cur = reports[k];
    const double band = policy.mc_trend_standard_errors *
                        std::sqrt(prev.estimator_standard_error *
                                      prev.estimator_standard_error +
                                  cur.estimator_standard_error *
                                      cur.estimator_standard_error);
    if (cur.empirical_estimator_variance >
        prev.empirical_estimator_variance + band) {
      std::ostringstream msg;
      msg << "empirical estimator variance is not decreasing across the "
          << "schedule: " << prev.empirical_estimator_variance << " at n = "
          << prev.n << " vs " << cur.empirical_estimator_variance
          << " at n = " << cur.n << " (band " << band << ")";
      throw Error(errc::statistical_check_failed, msg.str());
    }
  }

  // White noise approaches sigma2 from above: the prediction MSE must not
  // fall significantly below sigma2.
  if (base_config.model.kind == ModelKind::white_noise) {
    for (const McReport& report : reports) {
      const double floor = base_config.model.sigma2 -
                           policy.mc_trend_standard_errors *
                               report.standard_error;
      if (report.empirical_mse_prediction < floor) {
        std::ostringstream msg;
        msg << "white-noise prediction MSE " << report.empirical_mse_prediction
            << " at n = " << report.n
            << " falls below sigma2 minus the trend band (" << floor << ")";
        throw Error(errc::statistical_check_failed, msg.str());
      }
    }
  }
  return reports;
}

}  // namespace krig::mc
