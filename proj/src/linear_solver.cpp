#include "krig/detail/linear_solver.hpp"

#include <cmath>
#include <sstream>

#include "krig/error.hpp"

namespace krig::detail {

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& matrix,
                              const Eigen::VectorXd& rhs,
                              const NumericPolicy& policy,
                              const std::string& context) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size()) {
    throw Error(errc::invalid_argument,
                context + ": matrix/rhs shapes do not form a square system");
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(matrix);
  const double rcond = lu.rcond();
  if (!(rcond > 1.0 / policy.condition_threshold)) {
    std::ostringstream msg;
    msg << context << " is singular or near-singular (reciprocal condition "
        << "estimate " << rcond << ", threshold "
        << 1.0 / policy.condition_threshold
        << "); duplicate or coincident sample locations are the likely cause";
    throw Error(errc::singular_system, msg.str());
  }

  Eigen::VectorXd x = lu.solve(rhs);
  if (!x.allFinite()) {
    throw Error(errc::singular_system,
                context + ": solve produced non-finite values");
  }

  const double residual = (matrix * x - rhs).cwiseAbs().maxCoeff();
  const double scale = 1.0 + rhs.cwiseAbs().maxCoeff();
  if (!(residual <= policy.residual_tol * scale)) {
    std::ostringstream msg;
    msg << context << ": residual " << residual
        << " exceeds tolerance " << policy.residual_tol * scale;
    throw Error(errc::numeric_inconsistency, msg.str());
  }
  return x;
}

double clamp_variance(double v, double sigma2, const NumericPolicy& policy,
                      const std::string& what) {
  if (v >= 0.0) return v;
  if (v >= -policy.variance_clamp_rel * sigma2) return 0.0;
  std::ostringstream msg;
  msg << what << " is negative beyond round-off (" << v << " with sigma2 "
      << sigma2 << ")";
  throw Error(errc::numeric_inconsistency, msg.str());
}

void check_variance_agreement(double a, double b, double sigma2,
                              double rel_tol, const std::string& what) {
  const double scale = std::max({std::abs(a), std::abs(b), sigma2});
  if (!(std::abs(a - b) <= rel_tol * scale)) {
    std::ostringstream msg;
    msg << what << " disagree: " << a << " vs " << b
        << " (relative gap " << std::abs(a - b) / scale << ", tolerance "
        << rel_tol << ")";
    throw Error(errc::numeric_inconsistency, msg.str());
  }
}

}  // namespace krig::detail
