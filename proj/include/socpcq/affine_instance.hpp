#pragma once

// Affine constraint g(x) = Ax + b in Q_m, feasible-point analysis and the
// natural reduction at g(x).

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>

#include "socpcq/cone.hpp"

namespace socpcq {

class AffineSocInstance {
 public:
  AffineSocInstance(Matrix A, Vector b) : A_(std::move(A)), b_(std::move(b)) {
    if (A_.rows() < 2) throw InputError("cone order m must be >= 2");
    if (A_.cols() < 1) throw InputError("variable dimension n must be >= 1");
    if (b_.size() != A_.rows()) {
      throw InputError("b has length " + std::to_string(b_.size()) + ", expected m = " +
                       std::to_string(A_.rows()));
    }
    if (!A_.allFinite()) throw InputError("A contains non-finite entries");
    if (!b_.allFinite()) throw InputError("b contains non-finite entries");
    op_norm_ = A_.isZero(0.0) ? 0.0 : Eigen::JacobiSVD<Matrix>(A_).singularValues()(0);
  }

  Eigen::Index cone_order() const noexcept { return A_.rows(); }
  Eigen::Index dimension() const noexcept { return A_.cols(); }
  const Matrix& A() const noexcept { return A_; }
  const Vector& b() const noexcept { return b_; }
  /// Spectral norm of A.
  double operator_norm() const noexcept { return op_norm_; }

  Vector evaluate(const Vector& x) const {
    if (x.size() != dimension()) {
      throw InputError("point has dimension " + std::to_string(x.size()) + ", expected n = " +
                       std::to_string(dimension()));
    }
    return A_ * x + b_;
  }

 private:
  Matrix A_;
  Vector b_;
  double op_norm_ = 0.0;
};

/// Natural reduction at g(x): identity onto Q_m at the vertex, the zero map at
/// interior points, and Xi(y) = y0 - |y_r| onto R_+ on bd+.
struct ReductionInfo {
  enum class Kind { ZeroCase, InteriorCase, BoundaryCase };
  Kind kind = Kind::InteriorCase;
  double phi = 0.0;
  Vector grad_phi;  // BoundaryCase only
};

inline std::string_view to_string(ReductionInfo::Kind k) {
  switch (k) {
    case ReductionInfo::Kind::ZeroCase: return "zero_case";
    case ReductionInfo::Kind::InteriorCase: return "interior_case";
    case ReductionInfo::Kind::BoundaryCase: return "boundary_case";
  }
  return "unknown";
}

struct PointAnalysis {
  Vector x;
  Vector y;
  ConeLocation location = ConeLocation::Interior;
  ReductionInfo reduction;
  double tol = kDefaultTol;
};

namespace detail {

inline void require_nonsingular_reduction(const Vector& y, double tol) {
  const double yr = y.tail(y.size() - 1).norm();
  if (yr <= tol * std::max(1.0, y.norm())) {
    throw SingularReductionError("boundary reduction undefined: g_r(x) = 0");
  }
}

}  // namespace detail

/// phi(x) = g0(x) - |g_r(x)|.
inline double phi(const AffineSocInstance& inst, const Vector& x, double tol = kDefaultTol) {
  const Vector y = inst.evaluate(x);
  detail::require_nonsingular_reduction(y, tol);
  return cone_margin(y);
}

/// grad phi(x) = A0 - (g_r(x)^T / |g_r(x)|) A_r, returned as an n-vector.
inline Vector grad_phi(const AffineSocInstance& inst, const Vector& x, double tol = kDefaultTol) {
  const Vector y = inst.evaluate(x);
  detail::require_nonsingular_reduction(y, tol);
  const Eigen::Index m = inst.cone_order();
  const Matrix& A = inst.A();
  const Vector yr = y.tail(m - 1);
  return A.row(0).transpose() - A.bottomRows(m - 1).transpose() * (yr / yr.norm());
}

inline PointAnalysis analyze_point(const AffineSocInstance& inst, const Vector& x,
                                   double tol = kDefaultTol) {
  PointAnalysis pa;
  pa.x = x;
  pa.y = inst.evaluate(x);
  pa.tol = tol;
  pa.location = classify_cone_point(pa.y, tol);
  switch (pa.location) {
    case ConeLocation::Outside: {
      const double d = distance_to_cone(pa.y);
      throw InfeasiblePointError("point is infeasible: dist(g(x), Q_m) = " + std::to_string(d), d);
    }
    case ConeLocation::Zero:
      pa.reduction.kind = ReductionInfo::Kind::ZeroCase;
      break;
    case ConeLocation::Interior:
      pa.reduction.kind = ReductionInfo::Kind::InteriorCase;
      break;
    case ConeLocation::PositiveBoundary:
      pa.reduction.kind = ReductionInfo::Kind::BoundaryCase;
      pa.reduction.phi = phi(inst, x, tol);
      pa.reduction.grad_phi = grad_phi(inst, x, tol);
      break;
  }
  return pa;
}

/// H(x) = A^T [N_{Q_m}(g(x))].
struct HSetDescription {
  enum class Kind { ZeroOnly, RayImage, ConeImage };
  Kind kind = Kind::ZeroOnly;
  /// RayImage: A^T (-y0, y_r), possibly zero.
  Vector generator;
  /// ConeImage: A^T(-Q_m) is described by A itself; closedness is decided by the CQ checker.
  std::optional<bool> closed;
};

inline std::string_view to_string(HSetDescription::Kind k) {
  switch (k) {
    case HSetDescription::Kind::ZeroOnly: return "zero_only";
    case HSetDescription::Kind::RayImage: return "ray_image";
    case HSetDescription::Kind::ConeImage: return "cone_image";
  }
  return "unknown";
}

inline HSetDescription h_set_description(const AffineSocInstance& inst, const PointAnalysis& pa) {
  HSetDescription h;
  switch (pa.location) {
    case ConeLocation::Interior:
      h.kind = HSetDescription::Kind::ZeroOnly;
      h.closed = true;
      break;
    case ConeLocation::PositiveBoundary:
      h.kind = HSetDescription::Kind::RayImage;
      h.generator = inst.A().transpose() * lorentz_reflect(pa.y);
      h.closed = true;
      break;
    default:
      h.kind = HSetDescription::Kind::ConeImage;
      break;
  }
  return h;
}

inline HSetDescription h_set_description(const AffineSocInstance& inst, const Vector& x,
                                         double tol = kDefaultTol) {
  return h_set_description(inst, analyze_point(inst, x, tol));
}

/// d in L(x) = { d : A d in T_{Q_m}(g(x)) }.
inline bool linearization_cone_membership(const AffineSocInstance& inst, const PointAnalysis& pa,
                                          const Vector& d) {
  if (d.size() != inst.dimension()) throw InputError("direction has wrong dimension");
  switch (pa.reduction.kind) {
    case ReductionInfo::Kind::InteriorCase:
      return true;
    case ReductionInfo::Kind::ZeroCase: {
      const Vector Ad = inst.A() * d;
      return cone_margin(Ad) >= -pa.tol * std::max(1.0, Ad.norm());
    }
    case ReductionInfo::Kind::BoundaryCase:
      return pa.reduction.grad_phi.dot(d) >= -pa.tol * std::max(1.0, pa.y.norm() * d.norm());
  }
  return false;
}

inline bool linearization_cone_membership(const AffineSocInstance& inst, const Vector& x,
                                          const Vector& d, double tol = kDefaultTol) {
  return linearization_cone_membership(inst, analyze_point(inst, x, tol), d);
}

/// g(x) = (w^T x + c)(1, u) with |u| = 1; the boundary reduction is then
/// identically zero wherever w^T x + c > 0.
struct VanishingCertificate {
  Vector u;
  Vector w;
  double c = 0.0;
};

/// Certificate exists iff Im(A) lies in span(g(x)): every column of A is
/// parallel to g(x) within tol * |A| * max(1, |g(x)|).
inline std::optional<VanishingCertificate> vanishing_reduction_test(const AffineSocInstance& inst,
                                                                    const PointAnalysis& pa) {
  if (pa.location != ConeLocation::PositiveBoundary) {
    throw PreconditionError("vanishing_reduction_test: point must map to bd+(Q_m)");
  }
  const Eigen::Index m = inst.cone_order();
  const Vector dir = pa.y.normalized();
  const Matrix& A = inst.A();
  const Matrix residual = A - dir * (dir.transpose() * A);
  const double bound = pa.tol * inst.operator_norm() * std::max(1.0, pa.y.norm());
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    if (residual.col(j).norm() > bound) return std::nullopt;
  }
  VanishingCertificate cert;
  cert.u = pa.y.tail(m - 1).normalized();
  cert.w = A.row(0).transpose();
  cert.c = inst.b()(0);
  return cert;
}

inline std::optional<VanishingCertificate> vanishing_reduction_test(const AffineSocInstance& inst,
                                                                    const Vector& x,
                                                                    double tol = kDefaultTol) {
  return vanishing_reduction_test(inst, analyze_point(inst, x, tol));
}

}  // namespace socpcq
