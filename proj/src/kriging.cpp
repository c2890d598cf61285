#include "krig/kriging.hpp"

#include <cmath>
#include <sstream>

#include "krig/detail/linear_solver.hpp"
#include "krig/error.hpp"

namespace krig {

void SampleSet::validate() const {
  if (locations.empty()) {
    throw Error(errc::invalid_argument, "sample set must not be empty");
  }
  if (locations.size() != values.size()) {
    throw Error(errc::invalid_argument,
                "sample set has " + std::to_string(locations.size()) +
                    " locations but " + std::to_string(values.size()) +
                    " values");
  }
  const std::size_t d = locations[0].dim();
  if (d < 1 || d > 3) {
    throw Error(errc::invalid_argument,
                "location dimension must be 1, 2 or 3, got " +
                    std::to_string(d));
  }
  for (std::size_t i = 0; i < locations.size(); ++i) {
    if (locations[i].dim() != d) {
      throw_dimension_mismatch(d, locations[i].dim(),
                               "sample location " + std::to_string(i));
    }
    for (double c : locations[i].coords) {
      if (!std::isfinite(c)) {
        throw Error(errc::invalid_argument,
                    "sample location " + std::to_string(i) +
                        " has a non-finite coordinate");
      }
    }
    if (!std::isfinite(values[i])) {
      throw Error(errc::invalid_argument,
                  "sample value " + std::to_string(i) + " is not finite");
    }
  }
}

KrigingSystem build_system(const CorrelationModel& model,
                           const SampleSet& samples, const Location& target) {
  model.validate();
  samples.validate();
  if (target.dim() != samples.dim()) {
    throw_dimension_mismatch(samples.dim(), target.dim(), "target location");
  }

  const auto n = static_cast<Eigen::Index>(samples.size());
  KrigingSystem system;
  system.n = n;
  system.augmented.resize(n + 1, n + 1);
  system.augmented.topLeftCorner(n, n) =
      correlation_matrix(model, samples.locations);
  system.augmented.col(n).head(n).setOnes();
  system.augmented.row(n).head(n).setOnes();
  system.augmented(n, n) = 0.0;

  system.rhs.resize(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    system.rhs(i) = correlation(model, samples.locations[i], target);
  }
  system.rhs(n) = 1.0;
  return system;
}

KrigingSolution solve_system(const KrigingSystem& system,
                             const NumericPolicy& policy) {
  const Eigen::Index n = system.n;
  if (n < 1 || system.augmented.rows() != n + 1 ||
      system.augmented.cols() != n + 1 || system.rhs.size() != n + 1) {
    throw Error(errc::invalid_argument,
                "kriging system shapes are inconsistent with n = " +
                    std::to_string(n));
  }

  const Eigen::VectorXd x =
      detail::solve_checked(system.augmented, system.rhs, policy,
                            "kriging system");

  KrigingSolution solution;
  solution.weights = x.head(n);
  solution.lagrange = x(n);

  const double weight_sum = solution.weights.sum();
  if (!(std::abs(weight_sum - 1.0) <= policy.weight_sum_tol)) {
    std::ostringstream msg;
    msg << "kriging weights sum to " << weight_sum
        << ", violating the unbiasedness constraint beyond tolerance "
        << policy.weight_sum_tol;
    throw Error(errc::numeric_inconsistency, msg.str());
  }
  return solution;
}

PredictionDetail predict_detailed(const CorrelationModel& model,
                                  const SampleSet& samples,
                                  const Location& target,
                                  const NumericPolicy& policy) {
  const KrigingSystem system = build_system(model, samples, target);
  KrigingSolution solution = solve_system(system, policy);

  const Eigen::Index n = system.n;
  const double sigma2 = model.sigma2;
  const Eigen::VectorXd rho_t = system.rhs.head(n);
  const auto lambda = system.augmented.topLeftCorner(n, n);
  const Eigen::Map<const Eigen::VectorXd> values(samples.values.data(), n);

  const double w_rho = solution.weights.dot(rho_t);
  const double w_lambda_w = solution.weights.dot(lambda * solution.weights);

  // Lagrange-form variances, the reported quantities.
  double kriging_variance = sigma2 * (1.0 - (w_rho + solution.lagrange));
  double estimator_variance = sigma2 * (w_rho - solution.lagrange);

  // Quadratic-form ground truth; the two routes must agree.
  const double kriging_variance_q =
      sigma2 * (1.0 - 2.0 * w_rho + w_lambda_w);
  const double estimator_variance_q = sigma2 * w_lambda_w;
  detail::check_variance_agreement(kriging_variance, kriging_variance_q,
                                   sigma2, policy.formula_equivalence_rel_tol,
                                   "kriging variance expressions");
  detail::check_variance_agreement(
      estimator_variance, estimator_variance_q, sigma2,
      policy.estimator_equivalence_rel_tol, "estimator variance expressions");

  kriging_variance = detail::clamp_variance(kriging_variance, sigma2, policy,
                                            "kriging variance");
  estimator_variance = detail::clamp_variance(estimator_variance, sigma2,
                                              policy, "estimator variance");

  PredictionDetail result;
  result.prediction.estimate = solution.weights.dot(values);
  result.prediction.kriging_variance = kriging_variance;
  result.prediction.estimator_variance = estimator_variance;
  result.prediction.field_variance = sigma2;
  result.solution = std::move(solution);
  return result;
}

Prediction predict(const CorrelationModel& model, const SampleSet& samples,
                   const Location& target, const NumericPolicy& policy) {
  return predict_detailed(model, samples, target, policy).prediction;
}

CrossValidationReport cross_validate(const CorrelationModel& model,
                                     const SampleSet& samples,
                                     const NumericPolicy& policy) {
  model.validate();
  samples.validate();
  const std::size_t n = samples.size();
  if (n < 2) {
    throw Error(errc::invalid_argument,
                "cross-validation requires at least two samples, got " +
                    std::to_string(n));
  }

  CrossValidationReport report;
  report.folds.reserve(n);
  double squared_residuals = 0.0;
  double kriging_variances = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    SampleSet rest;
    rest.locations.reserve(n - 1);
    rest.values.reserve(n - 1);
    for (std::size_t l = 0; l < n; ++l) {
      if (l == i) continue;
      rest.locations.push_back(samples.locations[l]);
      rest.values.push_back(samples.values[l]);
    }

    CrossValidationFold fold;
    fold.held_out_index = i;
    fold.actual_value = samples.values[i];
    try {
      fold.prediction = predict(model, rest, samples.locations[i], policy);
      const double residual = fold.prediction->estimate - fold.actual_value;
      squared_residuals += residual * residual;
      kriging_variances += fold.prediction->kriging_variance;
      ++report.evaluated;
    } catch (const Error& e) {
      if (e.code() != errc::singular_system) throw;
      fold.warning = e.what();
    }
    report.folds.push_back(std::move(fold));
  }

  if (report.evaluated > 0) {
    report.mean_squared_residual =
        squared_residuals / static_cast<double>(report.evaluated);
    report.mean_kriging_variance =
        kriging_variances / static_cast<double>(report.evaluated);
  }
  return report;
}

}  // namespace krig
