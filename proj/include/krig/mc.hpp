#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "krig/kriging.hpp"
#include "krig/numeric_policy.hpp"

namespace krig::mc {

enum class Layout { unit_grid, random_uniform };

Layout layout_from_string(const std::string& name);
const char* to_string(Layout layout);

// Axis-aligned box; its dimension fixes the location dimension. Only the
// random_uniform layout samples inside it, unit_grid uses an integer
// lattice anchored at the origin.
struct BoundingBox {
  std::vector<double> lo{0.0};
  std::vector<double> hi{1.0};

  std::size_t dim() const { return lo.size(); }
  void validate() const;
};

struct SimulationConfig {
  std::uint64_t seed = 0;
  std::size_t replicates = 1;
  std::size_t n = 1;  // sample count
  CorrelationModel model;
  double mean = 0.0;  // the field mean m
  Layout layout = Layout::unit_grid;
  BoundingBox box;
  // replicates * drawn-locations capped here to keep desk-scale runtimes.
  std::size_t draw_budget = 100'000'000;

  void validate() const;
};

struct McReport {
  double empirical_mse_prediction = 0.0;      // mean of (V_j - Vhat_j)^2
  double empirical_estimator_variance = 0.0;  // mean of (Vhat_j - m)^2
  double analytic_kriging_variance = 0.0;
  double analytic_estimator_variance = 0.0;
  double standard_error = 0.0;            // of empirical_mse_prediction
  double estimator_standard_error = 0.0;  // of empirical_estimator_variance
  std::size_t replicates = 0;
  std::size_t n = 0;
};

// Deterministic sample locations for the configured layout.
std::vector<Location> sample_locations(const SimulationConfig& config);

// Centroid of the locations shifted by +0.25 per axis; off-sample for any
// unit_grid layout.
Location default_target(const std::vector<Location>& locs);

// Draws jointly Gaussian replicate rows over the given locations with mean
// config.mean and covariance sigma2 * R via a Cholesky square root of R.
// Coincident locations share one draw, so a target placed on a sample
// reproduces that sample's value exactly. Deterministic given the seed;
// row r depends only on (seed, r), not on the replicate count.
Eigen::MatrixXd simulate_field(const SimulationConfig& config,
                               const std::vector<Location>& locations);

// Streams the same replicates over (samples, target), computes Vhat_j from
// kriging weights solved once, and compares empirical moments against the
// analytic variances reported by predict().
McReport verify_prediction_variance(const SimulationConfig& config,
                                    const Location& target,
                                    const NumericPolicy& policy = default_policy());

// verify_prediction_variance per schedule entry (with the default target),
// then asserts the empirical estimator variance decreases along the
// schedule within the trend band, and, for white noise, that the
// prediction MSE does not fall significantly below sigma2.
std::vector<McReport> verify_asymptotics(const SimulationConfig& base_config,
                                         const std::vector<std::size_t>& n_schedule,
                                         const NumericPolicy& policy = default_policy());

namespace detail {

// Substream generator for (seed, stream): mt19937_64 seeded through
// std::seed_seq, so draws are reproducible and independent of how
// replicates are partitioned. Stream 0 feeds the layout, stream 1 + r
// feeds replicate r.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream);

}  // namespace detail

}  // namespace krig::mc
