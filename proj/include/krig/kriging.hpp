#pragma once

#include <optional>
#include <string>
#include <vector>

#include "krig/correlation.hpp"
#include "krig/numeric_policy.hpp"

namespace krig {

// Observed values v_i at their sample locations.
struct SampleSet {
  std::vector<Location> locations;
  std::vector<double> values;

  std::size_t size() const { return locations.size(); }
  std::size_t dim() const { return locations.empty() ? 0 : locations[0].dim(); }

  // Equal lengths, n >= 1, finite values, one common dimension in 1..3.
  void validate() const;
};

// The augmented ordinary-kriging system: the sample correlation matrix
// bordered by the unbiasedness row and column,
//
//   [ Lambda  1 ] [ w  ]   [ rho_t ]
//   [ 1'      0 ] [ mu ] = [ 1     ]
//
// with rho_t the sample-to-target correlations.
struct KrigingSystem {
  Eigen::MatrixXd augmented;  // (n+1) x (n+1)
  Eigen::VectorXd rhs;        // n cross-correlations, then 1
  Eigen::Index n = 0;
};

struct KrigingSolution {
  Eigen::VectorXd weights;  // sums to 1 within tolerance
  double lagrange = 0.0;
};

// Point prediction with both variance decompositions.
struct Prediction {
  double estimate = 0.0;
  // E{[(V_j - m) - (Vhat_j - m)]^2}, the prediction error variance.
  double kriging_variance = 0.0;
  // E{[Vhat_j - m]^2}, the variance of the predictor itself.
  double estimator_variance = 0.0;
  double field_variance = 0.0;  // sigma2
};

struct PredictionDetail {
  Prediction prediction;
  KrigingSolution solution;
};

KrigingSystem build_system(const CorrelationModel& model,
                           const SampleSet& samples, const Location& target);

// Solves the augmented system by row-pivoted LU. Fails as singular_system
// when the condition estimate exceeds the policy threshold (coincident
// sample locations are the usual cause).
KrigingSolution solve_system(const KrigingSystem& system,
                             const NumericPolicy& policy = default_policy());

Prediction predict(const CorrelationModel& model, const SampleSet& samples,
                   const Location& target,
                   const NumericPolicy& policy = default_policy());

// predict() plus the weights and Lagrange multiplier behind it.
PredictionDetail predict_detailed(const CorrelationModel& model,
                                  const SampleSet& samples,
                                  const Location& target,
                                  const NumericPolicy& policy = default_policy());

struct CrossValidationFold {
  std::size_t held_out_index = 0;
  std::optional<Prediction> prediction;  // empty when the fold was skipped
  double actual_value = 0.0;
  std::string warning;  // reason when skipped
};

struct CrossValidationReport {
  std::vector<CrossValidationFold> folds;  // ordered by held-out index
  double mean_squared_residual = 0.0;
  double mean_kriging_variance = 0.0;
  std::size_t evaluated = 0;  // folds that produced a prediction
};

// Leave-one-out harness over predict(). A singular fold is recorded with a
// warning instead of failing the whole run.
CrossValidationReport cross_validate(const CorrelationModel& model,
                                     const SampleSet& samples,
                                     const NumericPolicy& policy = default_policy());

}  // namespace krig
