#pragma once

// How the subspace Im(A) meets Q_m. A subspace either reaches int(Q_m),
// touches Q_m only at 0, or touches it along exactly one boundary ray; the
// inertia of the Lorentz form y0^2 - |y_r|^2 restricted to Im(A) tells which.

#include <Eigen/Dense>

#include <cmath>
#include <string_view>

#include "socpcq/cone.hpp"

namespace socpcq {

/// Singular values above tol * sigma_max.
inline int numeric_rank(const Matrix& M, double tol = kDefaultTol) {
  if (M.size() == 0) return 0;
  const Vector sv = Eigen::JacobiSVD<Matrix>(M).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol * sv(0)) ++r;
  }
  return r;
}

/// Orthonormal basis of Im(A), one column per basis vector.
inline Matrix image_basis(const Matrix& A, double tol = kDefaultTol) {
  if (A.size() == 0 || A.isZero(0.0)) return Matrix(A.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU);
  const Vector& sv = svd.singularValues();
  Eigen::Index k = 0;
  while (k < sv.size() && sv(k) > tol * sv(0)) ++k;
  return svd.matrixU().leftCols(k);
}

/// B^T J B for an orthonormal basis B, J = diag(1, -1, ..., -1).
inline Matrix restricted_lorentz_form(const Matrix& B) {
  Matrix JB = -B;
  JB.row(0) = B.row(0);
  Matrix M = B.transpose() * JB;
  return 0.5 * (M + M.transpose());
}

struct SubspaceConeClass {
  enum class Kind { MeetsInterior, ZeroOnly, Ray };
  Kind kind = Kind::ZeroOnly;
  /// Ray: unit generator in bd+(Q_m).
  Vector ray;
  /// MeetsInterior: unit vector of Im(A) in int(Q_m).
  Vector witness;
  double lambda_max = 0.0;
  /// |lambda_max| <= tol without an admissible null direction; the ZeroOnly
  /// verdict is then a tolerance call.
  bool marginal = false;
  int rank = 0;
};

inline std::string_view to_string(SubspaceConeClass::Kind k) {
  switch (k) {
    case SubspaceConeClass::Kind::MeetsInterior: return "meets_interior";
    case SubspaceConeClass::Kind::ZeroOnly: return "zero_only";
    case SubspaceConeClass::Kind::Ray: return "ray";
  }
  return "unknown";
}

inline SubspaceConeClass classify_image_vs_cone(const Matrix& A, double tol = kDefaultTol) {
  if (A.rows() < 2) throw InputError("classify_image_vs_cone: cone order m must be >= 2");
  SubspaceConeClass out;
  const Matrix B = image_basis(A, tol);
  out.rank = static_cast<int>(B.cols());
  if (B.cols() == 0) return out;

  Eigen::SelfAdjointEigenSolver<Matrix> eig(restricted_lorentz_form(B));
  if (eig.info() != Eigen::Success) {
    throw NumericalFailure("classify_image_vs_cone: symmetric eigensolver did not converge");
  }
  const Vector& lam = eig.eigenvalues();  // ascending
  const Eigen::Index k = lam.size();
  out.lambda_max = lam(k - 1);

  if (out.lambda_max > tol) {
    Vector w = B * eig.eigenvectors().col(k - 1);
    if (w(0) < 0) w = -w;
    out.kind = SubspaceConeClass::Kind::MeetsInterior;
    out.witness = w.normalized();
    return out;
  }

  // Null directions of a negative semidefinite form: project e0 onto their
  // image, which picks the null vector with the largest first coordinate.
  Eigen::Index first_null = k;
  while (first_null > 0 && std::abs(lam(first_null - 1)) <= tol) --first_null;
  if (first_null < k) {
    const Matrix Z = eig.eigenvectors().rightCols(k - first_null);
    const Vector q = Z.transpose() * B.row(0).transpose();
    if (q.norm() > tol) {
      const Vector w = B * (Z * q);
      out.kind = SubspaceConeClass::Kind::Ray;
      out.ray = (w(0) >= 0 ? w : Vector(-w)).normalized();
      return out;
    }
  }
  out.kind = SubspaceConeClass::Kind::ZeroOnly;
  out.marginal = std::abs(out.lambda_max) <= tol;
  return out;
}

/// Im(A) = R v.
inline bool image_equals_line(const Matrix& A, const Vector& v, double tol = kDefaultTol) {
  if (v.size() != A.rows()) throw InputError("image_equals_line: v has wrong dimension");
  if (v.norm() == 0.0) throw InputError("image_equals_line: v must be nonzero");
  const Matrix B = image_basis(A, tol);
  if (B.cols() != 1) return false;
  const Vector vhat = v.normalized();
  const Vector b = B.col(0);
  return (b - b.dot(vhat) * vhat).norm() <= tol;
}

}  // namespace socpcq
