#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "krig/error.hpp"

namespace krig {

// A sample or target point in 1-, 2- or 3-dimensional space.
struct Location {
  std::vector<double> coords;

  Location() = default;
  Location(std::initializer_list<double> c) : coords(c) {}
  explicit Location(std::vector<double> c) : coords(std::move(c)) {}

  std::size_t dim() const { return coords.size(); }
};

// Euclidean distance; throws on dimension mismatch.
double distance(const Location& a, const Location& b);

// Exact coordinate equality (used for duplicate detection).
bool same_location(const Location& a, const Location& b);

enum class ModelKind { white_noise, exponential, gaussian, spherical };

ModelKind model_kind_from_string(const std::string& name);
const char* to_string(ModelKind kind);

// Isotropic correlation rho(h), unit at h = 0, plus the field variance
// scale sigma2. The nugget removes a fraction of the correlation at h > 0
// and never touches the diagonal:
//
//   white_noise  rho(h) = [h == 0]
//   exponential  rho(h) = (1 - nugget) exp(-h / range)
//   gaussian     rho(h) = (1 - nugget) exp(-(h / range)^2)
//   spherical    rho(h) = (1 - nugget) (1 - 1.5 u + 0.5 u^3), u = h / range < 1
//                         0 for h >= range
struct CorrelationModel {
  ModelKind kind = ModelKind::white_noise;
  std::optional<double> range;  // required for every kind except white_noise
  double sigma2 = 1.0;
  double nugget = 0.0;

  static CorrelationModel white_noise(double sigma2);
  static CorrelationModel exponential(double range, double sigma2,
                                      double nugget = 0.0);
  static CorrelationModel gaussian(double range, double sigma2,
                                   double nugget = 0.0);
  static CorrelationModel spherical(double range, double sigma2,
                                    double nugget = 0.0);

  // Throws invalid_argument when a parameter is outside its domain.
  void validate() const;
};

// rho at distance h >= 0; returns exactly 1 when h == 0.
double correlation_at_distance(const CorrelationModel& model, double h);

// rho between two points of equal dimension.
double correlation(const CorrelationModel& model, const Location& a,
                   const Location& b);

// Symmetric n x n matrix with unit diagonal; entry (i, l) is the
// correlation between locs[i] and locs[l]. Singularity (e.g. coincident
// locations) is not detected here; the solvers reject it.
Eigen::MatrixXd correlation_matrix(const CorrelationModel& model,
                                   const std::vector<Location>& locs);

}  // namespace krig
