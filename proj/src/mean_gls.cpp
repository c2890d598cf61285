#include "krig/mean_gls.hpp"

#include <cmath>
#include <sstream>

#include "krig/detail/linear_solver.hpp"
#include "krig/error.hpp"

namespace krig {

namespace {

void check_weight_sum(const Eigen::VectorXd& weights,
                      const NumericPolicy& policy, const char* context) {
  const double sum = weights.sum();
  if (!(std::abs(sum - 1.0) <= policy.weight_sum_tol)) {
    std::ostringstream msg;
    msg << context << ": weights sum to " << sum
        << ", violating the constraint beyond tolerance "
        << policy.weight_sum_tol;
    throw Error(errc::numeric_inconsistency, msg.str());
  }
}

MeanEstimate finish_estimate(const SampleSet& samples, Eigen::VectorXd weights,
                             double xi, double sigma2,
                             const NumericPolicy& policy,
                             const char* context) {
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    std::ostringstream msg;
    msg << context << ": xi = " << xi
        << " is not positive; the correlation matrix is not positive "
           "definite";
    throw Error(errc::numeric_inconsistency, msg.str());
  }
  check_weight_sum(weights, policy, context);

  const auto n = static_cast<Eigen::Index>(samples.size());
  const Eigen::Map<const Eigen::VectorXd> values(samples.values.data(), n);

  MeanEstimate estimate;
  estimate.mean = weights.dot(values);
  estimate.xi = xi;
  estimate.mse = 2.0 * xi * sigma2;
  estimate.weights = std::move(weights);
  return estimate;
}

}  // namespace

MeanEstimate gls_mean(const CorrelationModel& model, const SampleSet& samples,
                      const NumericPolicy& policy) {
  model.validate();
  samples.validate();

  const auto n = static_cast<Eigen::Index>(samples.size());
  const Eigen::MatrixXd lambda = correlation_matrix(model, samples.locations);
  const Eigen::VectorXd f = Eigen::VectorXd::Ones(n);

  const Eigen::VectorXd x =
      detail::solve_checked(lambda, f, policy, "correlation matrix");
  const double f_lambda_f = x.sum();  // F' Lambda^{-1} F
  const double xi = 1.0 / (2.0 * f_lambda_f);
  return finish_estimate(samples, x / f_lambda_f, xi, model.sigma2, policy,
                         "gls_mean");
}

MeanEstimate gls_mean_via_kriging(const CorrelationModel& model,
                                  const SampleSet& samples,
                                  const NumericPolicy& policy) {
  model.validate();
  samples.validate();

  const auto n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd augmented(n + 1, n + 1);
  augmented.topLeftCorner(n, n) = correlation_matrix(model, samples.locations);
  augmented.col(n).head(n).setConstant(-2.0);
  augmented.row(n).head(n).setOnes();
  augmented(n, n) = 0.0;

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs(n) = 1.0;

  const Eigen::VectorXd u =
      detail::solve_checked(augmented, rhs, policy, "mean kriging system");
  return finish_estimate(samples, u.head(n), u(n), model.sigma2, policy,
                         "gls_mean_via_kriging");
}

namespace {

// Two-pass sum of squared deviations about the arithmetic mean.
double deviation_square_sum(std::span<const double> values) {
  if (values.empty()) {
    throw Error(errc::invalid_argument,
                "variance of an empty value list is undefined");
  }
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(errc::invalid_argument, "values contain a non-finite entry");
    }
    sum += v;
  }
  const double mean = sum / static_cast<double>(values.size());
  double deviation_squares = 0.0;
  for (double v : values) {
    const double d = v - mean;
    deviation_squares += d * d;
  }
  return deviation_squares;
}

}  // namespace

double biased_variance(std::span<const double> values) {
  return deviation_square_sum(values) / static_cast<double>(values.size());
}

VarianceEstimate sample_variance(std::span<const double> values) {
  if (values.size() < 2) {
    throw Error(errc::invalid_argument,
                "the unbiased variance requires at least two values, got " +
                    std::to_string(values.size()));
  }
  const double ss = deviation_square_sum(values);
  const auto n = static_cast<double>(values.size());
  VarianceEstimate estimate;
  estimate.biased = ss / n;
  estimate.unbiased = ss / (n - 1.0);
  return estimate;
}

WhiteNoiseReport white_noise_report(std::size_t n, double sigma2) {
  if (n < 1) {
    throw Error(errc::invalid_argument, "n must be at least 1");
  }
  if (!(std::isfinite(sigma2) && sigma2 > 0.0)) {
    throw Error(errc::invalid_argument,
                "sigma2 must be a positive finite number, got " +
                    std::to_string(sigma2));
  }
  const double dn = static_cast<double>(n);
  WhiteNoiseReport report;
  report.kriging_variance = sigma2 * (1.0 + 1.0 / dn);
  report.estimator_variance = sigma2 / dn;
  report.lagrange = -1.0 / dn;
  report.gls_mse = sigma2 / dn;
  return report;
}

}  // namespace krig
