#pragma once

// Shared instance builders for the test suites and the acceptance binary.

#include <algorithm>
#include <string>

#include "socpcq/affine_instance.hpp"
#include "socpcq/oracles/sampling.hpp"

#ifndef SOCPCQ_SOURCE_DIR
#define SOCPCQ_SOURCE_DIR "."
#endif

namespace socpcq::support {

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline std::string fixture(const std::string& name) {
  return std::string(SOCPCQ_SOURCE_DIR) + "/fixtures/" + name;
}

/// Ax = (x1, x1, x3).
inline Matrix degenerate_boundary_matrix() {
  Matrix A(3, 3);
  A << 1, 0, 0, 1, 0, 0, 0, 0, 1;
  return A;
}

/// Ax = (x1, x1, x2).
inline Matrix vertex_ray_plane_matrix() {
  Matrix A(3, 2);
  A << 1, 0, 1, 0, 0, 1;
  return A;
}

/// Ax = (x, -x, 0).
inline Matrix vertex_ray_line_matrix() {
  Matrix A(3, 1);
  A << 1, -1, 0;
  return A;
}

inline AffineSocInstance homogeneous(const Matrix& A) { return AffineSocInstance(A, Vector::Zero(A.rows())); }

/// Unit v in bd+(Q_m) and k - 1 further directions in the supporting
/// hyperplane (Jv)^perp, mixed into n columns. Im(A) then meets Q_m exactly
/// in R_+ v.
struct RayMatrix {
  Matrix A;
  Vector v;
};

inline RayMatrix ray_matrix(oracles::Rng& rng, Eigen::Index m, Eigen::Index n, Eigen::Index k) {
  for (;;) {
    RayMatrix out;
    out.v = rng.boundary_ray(m);
    Vector Jv = out.v;
    Jv.tail(m - 1) = -Jv.tail(m - 1);
    Matrix cols(m, k);
    cols.col(0) = out.v;
    for (Eigen::Index j = 1; j < k; ++j) {
      Vector w = rng.gaussian(m);
      w -= (w.dot(Jv) / Jv.squaredNorm()) * Jv;
      cols.col(j) = w;
    }
    out.A = cols * rng.gaussian(k, n);
    const Eigen::JacobiSVD<Matrix> svd(out.A);
    const Vector sv = svd.singularValues();
    if (sv(k - 1) > 1e-3 * sv(0)) return out;
  }
}

/// Omega = { x : a^T (x - xbar) >= 0 } when Im(A) = R v with v in bd+:
/// p = x - (t(x) / |a|^2) a with t(x) = min(0, a^T (x - xbar)).
inline Vector halfspace_projection(const Vector& a, const Vector& xbar, const Vector& x) {
  const double t = std::min(0.0, a.dot(x - xbar));
  return x - (t / a.squaredNorm()) * a;
}

}  // namespace socpcq::support
