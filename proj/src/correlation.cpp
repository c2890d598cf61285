#include "krig/correlation.hpp"

#include <cmath>

namespace krig {

double distance(const Location& a, const Location& b) {
  if (a.dim() != b.dim()) {
    throw_dimension_mismatch(a.dim(), b.dim(), "distance");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const double d = a.coords[i] - b.coords[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

bool same_location(const Location& a, const Location& b) {
  return a.coords == b.coords;
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "white_noise") return ModelKind::white_noise;
  if (name == "exponential") return ModelKind::exponential;
  if (name == "gaussian") return ModelKind::gaussian;
  if (name == "spherical") return ModelKind::spherical;
  throw Error(errc::invalid_argument,
              "unknown correlation model '" + name +
                  "' (expected white_noise, exponential, gaussian or "
                  "spherical)");
}

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::white_noise: return "white_noise";
    case ModelKind::exponential: return "exponential";
    case ModelKind::gaussian: return "gaussian";
    case ModelKind::spherical: return "spherical";
  }
  return "unknown";
}

CorrelationModel CorrelationModel::white_noise(double sigma2) {
  CorrelationModel m;
  m.kind = ModelKind::white_noise;
  m.sigma2 = sigma2;
  m.validate();
  return m;
}

CorrelationModel CorrelationModel::exponential(double range, double sigma2,
                                               double nugget) {
  CorrelationModel m;
  m.kind = ModelKind::exponential;
  m.range = range;
  m.sigma2 = sigma2;
  m.nugget = nugget;
  m.validate();
  return m;
}

CorrelationModel CorrelationModel::gaussian(double range, double sigma2,
                                            double nugget) {
  CorrelationModel m;
  m.kind = ModelKind::gaussian;
  m.range = range;
  m.sigma2 = sigma2;
  m.nugget = nugget;
  m.validate();
  return m;
}

CorrelationModel CorrelationModel::spherical(double range, double sigma2,
                                             double nugget) {
  CorrelationModel m;
  m.kind = ModelKind::spherical;
  m.range = range;
  m.sigma2 = sigma2;
  m.nugget = nugget;
  m.validate();
  return m;
}

void CorrelationModel::validate() const {
  if (!(std::isfinite(sigma2) && sigma2 > 0.0)) {
    throw Error(errc::invalid_argument,
                "sigma2 must be a positive finite number, got " +
                    std::to_string(sigma2));
  }
  if (!(std::isfinite(nugget) && nugget >= 0.0 && nugget < 1.0)) {
    throw Error(errc::invalid_argument,
                "nugget must lie in [0, 1), got " + std::to_string(nugget));
  }
  if (kind == ModelKind::white_noise) {
    if (range.has_value()) {
      throw Error(errc::invalid_argument,
                  "range must be absent for the white_noise model");
    }
    return;
  }
  if (!range.has_value()) {
    throw Error(errc::invalid_argument,
                std::string("range is required for the ") + to_string(kind) +
                    " model");
  }
  if (!(std::isfinite(*range) && *range > 0.0)) {
    throw Error(errc::invalid_argument,
                "range must be a positive finite number, got " +
                    std::to_string(*range));
  }
}

double correlation_at_distance(const CorrelationModel& model, double h) {
  if (!(h >= 0.0)) {
    throw Error(errc::invalid_argument,
                "distance must be nonnegative, got " + std::to_string(h));
  }
  if (h == 0.0) return 1.0;

  const double scale = 1.0 - model.nugget;
  switch (model.kind) {
    case ModelKind::white_noise:
      return 0.0;
    case ModelKind::exponential:
      return scale * std::exp(-h / *model.range);
    case ModelKind::gaussian: {
      const double u = h / *model.range;
      return scale * std::exp(-u * u);
    }
    case ModelKind::spherical: {
      const double u = h / *model.range;
      if (u >= 1.0) return 0.0;
      return scale * (1.0 - 1.5 * u + 0.5 * u * u * u);
    }
  }
  return 0.0;
}

double correlation(const CorrelationModel& model, const Location& a,
                   const Location& b) {
  return correlation_at_distance(model, distance(a, b));
}

Eigen::MatrixXd correlation_matrix(const CorrelationModel& model,
                                   const std::vector<Location>& locs) {
  if (locs.empty()) {
    throw Error(errc::invalid_argument,
                "correlation_matrix requires at least one location");
  }
  const auto n = static_cast<Eigen::Index>(locs.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = 1.0;
    for (Eigen::Index l = i + 1; l < n; ++l) {
      const double rho = correlation(model, locs[i], locs[l]);
      m(i, l) = rho;
      m(l, i) = rho;
    }
  }
  return m;
}

}  // namespace krig
