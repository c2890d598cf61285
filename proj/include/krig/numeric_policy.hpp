#pragma once

#include <string>

namespace krig {

// Tolerances used by the solvers, the internal consistency checks and the
// Monte Carlo acceptance thresholds. One record, library-wide defaults;
// the CLI can override individual fields through KRIGE_NUMERIC_POLICY.
struct NumericPolicy {
  // Estimated condition number above this makes a solve fail as singular.
  double condition_threshold = 1e12;
  // |sum(weights) - 1| allowed after a solve.
  double weight_sum_tol = 1e-10;
  // Max-norm of A x - b, scaled by 1 + max|b|.
  double residual_tol = 1e-9;
  // Lagrange-form vs quadratic-form kriging variance, relative.
  double formula_equivalence_rel_tol = 1e-8;
  // sigma2 * w'Lw vs sigma2 * (w'rho - mu), relative.
  double estimator_equivalence_rel_tol = 1e-8;
  // Negative variances above -tol * sigma2 clamp to zero; anything more
  // negative is an internal-consistency failure.
  double variance_clamp_rel = 1e-9;
  // Auto-estimation identities (unit weight vector, zero multiplier).
  double auto_estimation_tol = 1e-10;
  // Estimate/variance stability under sample permutation, relative.
  double permutation_rel_tol = 1e-12;
  // White-noise closed forms (weights 1/n, multiplier -1/n, ...).
  double white_noise_tol = 1e-10;
  // gls_mean vs gls_mean_via_kriging, relative.
  double path_equivalence_rel_tol = 1e-10;
  // Analytic quantities reported by the MC harness vs the owning module.
  double oracle_match_tol = 1e-12;
  // Monte Carlo acceptance band in standard errors.
  double mc_standard_errors = 4.0;
  // Band for trend checks across an n-schedule.
  double mc_trend_standard_errors = 2.0;
};

inline const NumericPolicy& default_policy() {
  static const NumericPolicy policy{};
  return policy;
}

// Parses a JSON object of {field: value} overrides on top of the defaults.
// Unknown keys and non-positive values are invalid_argument errors.
NumericPolicy policy_from_json_text(const std::string& text,
                                    const std::string& origin);

// Loads overrides from the file named by KRIGE_NUMERIC_POLICY, if set.
NumericPolicy policy_from_env();

}  // namespace krig
