#pragma once

#include <string>

#include <Eigen/Dense>

#include "krig/numeric_policy.hpp"

namespace krig::detail {

// Row-pivoted LU solve with a reciprocal-condition gate and a scaled
// residual check. `context` names the system in error messages.
Eigen::VectorXd solve_checked(const Eigen::MatrixXd& matrix,
                              const Eigen::VectorXd& rhs,
                              const NumericPolicy& policy,
                              const std::string& context);

// Returns v, or 0 when v is a round-off-negative variance; throws
// numeric_inconsistency when v is more negative than -clamp_rel * sigma2.
double clamp_variance(double v, double sigma2, const NumericPolicy& policy,
                      const std::string& what);

// Asserts that two routes to the same variance agree to rel_tol, relative
// to max(|a|, |b|, sigma2).
void check_variance_agreement(double a, double b, double sigma2,
                              double rel_tol, const std::string& what);

}  // namespace krig::detail
