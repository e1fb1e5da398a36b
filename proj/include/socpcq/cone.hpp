#pragma once

// Euclidean geometry of the second-order (Lorentz) cone
//   Q_m = { (y0, y_r) in R x R^{m-1} : y0 >= |y_r| }.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "socpcq/errors.hpp"

namespace socpcq {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kHalfSqrt2 = 0.70710678118654752440;

enum class ConeLocation { Interior, PositiveBoundary, Zero, Outside };

inline std::string_view to_string(ConeLocation loc) {
  switch (loc) {
    case ConeLocation::Interior: return "interior";
    case ConeLocation::PositiveBoundary: return "positive_boundary";
    case ConeLocation::Zero: return "zero";
    case ConeLocation::Outside: return "outside";
  }
  return "unknown";
}

inline void require_cone_vector(const Vector& y) {
  if (y.size() < 2) {
    throw InputError("cone vector must have dimension m >= 2, got " + std::to_string(y.size()));
  }
}

inline void require_positive_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InputError("tolerance must be a positive finite number");
}

/// y0 - |y_r|; positive on the interior, zero on the boundary.
inline double cone_margin(const Vector& y) { return y(0) - y.tail(y.size() - 1).norm(); }

/// The reflected vector (-y0, y_r). On bd+(Q_m) it generates the normal ray.
inline Vector lorentz_reflect(const Vector& y) {
  Vector r = y;
  r(0) = -y(0);
  return r;
}

/// Classification under the relative tolerance tol * max(1, |y|). Ties at the
/// interior/boundary threshold resolve to PositiveBoundary.
inline ConeLocation classify_cone_point(const Vector& y, double tol = kDefaultTol) {
  require_cone_vector(y);
  require_positive_tol(tol);
  const double norm = y.norm();
  if (norm <= tol) return ConeLocation::Zero;
  const double scale = std::max(1.0, norm);
  const double margin = cone_margin(y);
  if (margin > tol * scale) return ConeLocation::Interior;
  if (margin < -tol * scale) return ConeLocation::Outside;
  return ConeLocation::PositiveBoundary;
}

/// Closed-form distance: 0 on Q_m, |y| on -Q_m, (sqrt2/2)(|y_r| - y0) otherwise.
inline double distance_to_cone(const Vector& y) {
  require_cone_vector(y);
  const double yr = y.tail(y.size() - 1).norm();
  if (y(0) >= yr) return 0.0;
  if (-y(0) >= yr) return y.norm();
  return kHalfSqrt2 * (yr - y(0));
}

inline Vector project_to_cone(const Vector& y) {
  require_cone_vector(y);
  const Eigen::Index m = y.size();
  const double yr = y.tail(m - 1).norm();
  if (y(0) >= yr) return y;
  if (-y(0) >= yr) return Vector::Zero(m);
  const double s = 0.5 * (y(0) + yr);
  Vector p(m);
  p(0) = s;
  p.tail(m - 1) = (s / yr) * y.tail(m - 1);
  return p;
}

inline void require_in_cone(ConeLocation loc, const char* op) {
  if (loc == ConeLocation::Outside) {
    throw PreconditionError(std::string(op) + ": point lies outside Q_m");
  }
}

/// Membership of d in the tangent cone T_{Q_m}(y).
inline bool tangent_membership(const Vector& y, const Vector& d, double tol = kDefaultTol) {
  const ConeLocation loc = classify_cone_point(y, tol);
  require_in_cone(loc, "tangent_membership");
  if (d.size() != y.size()) throw InputError("tangent_membership: direction dimension mismatch");
  switch (loc) {
    case ConeLocation::Interior:
      return true;
    case ConeLocation::Zero:
      return cone_margin(d) >= -tol * std::max(1.0, d.norm());
    case ConeLocation::PositiveBoundary:
      return lorentz_reflect(y).dot(d) <= tol * std::max(1.0, y.norm() * d.norm());
    case ConeLocation::Outside:
      break;
  }
  return false;
}

struct NormalConeDescriptor {
  enum class Kind { ZeroSet, MinusCone, Ray };
  Kind kind = Kind::ZeroSet;
  /// Set only for Ray: (-y0, y_r).
  Vector generator;
};

inline std::string_view to_string(NormalConeDescriptor::Kind k) {
  switch (k) {
    case NormalConeDescriptor::Kind::ZeroSet: return "zero_set";
    case NormalConeDescriptor::Kind::MinusCone: return "minus_cone";
    case NormalConeDescriptor::Kind::Ray: return "ray";
  }
  return "unknown";
}

inline NormalConeDescriptor normal_cone_descriptor(const Vector& y, double tol = kDefaultTol) {
  const ConeLocation loc = classify_cone_point(y, tol);
  require_in_cone(loc, "normal_cone_descriptor");
  switch (loc) {
    case ConeLocation::Interior: return {NormalConeDescriptor::Kind::ZeroSet, {}};
    case ConeLocation::Zero: return {NormalConeDescriptor::Kind::MinusCone, {}};
    default: return {NormalConeDescriptor::Kind::Ray, lorentz_reflect(y)};
  }
}

}  // namespace socpcq
