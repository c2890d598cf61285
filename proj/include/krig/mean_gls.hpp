#pragma once

#include <span>

#include "krig/kriging.hpp"

namespace krig {

// Generalized-least-squares estimate of the field mean. Weights are
// Lambda^{-1}F / (F'Lambda^{-1}F), xi = 1 / (2 F'Lambda^{-1}F), and the
// mean-squared error of mean estimation is 2 xi sigma2.
struct MeanEstimate {
  double mean = 0.0;
  double xi = 0.0;
  Eigen::VectorXd weights;  // sums to 1 within tolerance
  double mse = 0.0;         // 2 xi sigma2, nonnegative
};

// Deviation-square sums about the arithmetic mean, divided by n and n - 1.
struct VarianceEstimate {
  double biased = 0.0;
  double unbiased = 0.0;
};

// Closed forms for the white-noise field; the analytic targets the
// numerical pipeline must match.
struct WhiteNoiseReport {
  double kriging_variance = 0.0;    // sigma2 (1 + 1/n)
  double estimator_variance = 0.0;  // sigma2 / n
  double lagrange = 0.0;            // -1/n
  double gls_mse = 0.0;             // sigma2 / n
};

// Solves Lambda x = F once (no explicit inversion) and normalizes.
MeanEstimate gls_mean(const CorrelationModel& model, const SampleSet& samples,
                      const NumericPolicy& policy = default_policy());

// Independent second path: solves the augmented mean system
//
//   [ Lambda  -2F ] [ w  ]   [ 0 ]
//   [ F'       0  ] [ xi ] = [ 1 ]
//
// (the kriging system with its rhs head replaced by xi F and the
// multiplier slot carrying -xi, eliminated to Lambda w = 2 xi F).
MeanEstimate gls_mean_via_kriging(const CorrelationModel& model,
                                  const SampleSet& samples,
                                  const NumericPolicy& policy = default_policy());

// Sum of squared deviations over n; n >= 1.
double biased_variance(std::span<const double> values);

// Both the 1/n and 1/(n-1) estimators from one deviation-square sum
// (two-pass scheme); n >= 2.
VarianceEstimate sample_variance(std::span<const double> values);

WhiteNoiseReport white_noise_report(std::size_t n, double sigma2);

}  // namespace krig
