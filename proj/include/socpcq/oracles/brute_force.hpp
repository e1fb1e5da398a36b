#pragma once

// Search-based counterparts of the spectral subspace classifier and of the
// Zero-case modulus eta = min { dist(y, Q_m) : y in Im(A), |y| = 1 }. They
// search the unit sphere of Im(A) directly and never touch the Lorentz form.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>

#include "socpcq/cone.hpp"
#include "socpcq/oracles/sampling.hpp"
#include "socpcq/subspace_cone.hpp"

namespace socpcq::oracles {

struct SphereSearch {
  Vector best;  // unit vector of Im(A)
  double value = -std::numeric_limits<double>::infinity();
};

namespace detail {

/// Orthonormal basis of Im(A) from a pivoted Householder QR.
inline Matrix orthonormal_image(const Matrix& A) {
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  qr.setThreshold(1e-12);
  const Eigen::Index k = qr.rank();
  return Matrix(qr.householderQ()).leftCols(k);
}

/// Maximizes f over the unit sphere of Im(A): random sampling, then hill
/// climbing with a step that halves after each unsuccessful round.
inline SphereSearch search_image_sphere(const Matrix& A, const std::function<double(const Vector&)>& f,
                                        long samples, long refinement_steps, std::uint64_t seed) {
  Rng rng(seed);
  SphereSearch out;
  const Matrix Q = orthonormal_image(A);
  const Eigen::Index k = Q.cols();
  if (k == 0) return out;
  Vector best_u;
  for (long s = 0; s < samples; ++s) {
    const Vector u = rng.unit_vector(k);
    const Vector y = Q * u;
    const double v = f(y);
    if (v > out.value) {
      out.value = v;
      out.best = y;
      best_u = u;
    }
  }
  double step = 0.5;
  for (long r = 0; r < refinement_steps && step > 1e-15; ++r) {
    bool improved = false;
    for (int trial = 0; trial < 4 * static_cast<int>(k) + 4; ++trial) {
      const Vector u = (best_u + step * rng.unit_vector(k)).normalized();
      const Vector y = Q * u;
      const double v = f(y);
      if (v > out.value) {
        out.value = v;
        out.best = y;
        best_u = u;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return out;
}

}  // namespace detail

/// Max of y0 - |y_r| over the unit sphere of Im(A); |max| <= margin_tol reads as Ray.
inline SubspaceConeClass brute_force_subspace_class(const Matrix& A, long samples = 4000,
                                                    long refinement_steps = 400,
                                                    std::uint64_t seed = 0,
                                                    double margin_tol = 1e-10) {
  SubspaceConeClass out;
  if (A.size() == 0 || A.isZero(0.0)) return out;
  const SphereSearch s = detail::search_image_sphere(
      A,
      [](const Vector& y) {
        const double m1 = cone_margin(y);
        const double m2 = cone_margin(-y);
        return std::max(m1, m2);
      },
      samples, refinement_steps, seed);
  out.lambda_max = s.value;
  Vector v = s.best;
  if (v(0) < 0) v = -v;
  if (s.value > margin_tol) {
    out.kind = SubspaceConeClass::Kind::MeetsInterior;
    out.witness = v;
  } else if (s.value >= -margin_tol) {
    out.kind = SubspaceConeClass::Kind::Ray;
    out.ray = v;
  } else {
    out.kind = SubspaceConeClass::Kind::ZeroOnly;
  }
  return out;
}

/// Sampled eta; an upper estimate of the true minimum.
inline double sampled_eta(const Matrix& A, long samples = 4000, long refinement_steps = 400,
                          std::uint64_t seed = 0) {
  const SphereSearch s = detail::search_image_sphere(
      A, [](const Vector& y) { return -distance_to_cone(y); }, samples, refinement_steps, seed);
  return -s.value;
}

}  // namespace socpcq::oracles
