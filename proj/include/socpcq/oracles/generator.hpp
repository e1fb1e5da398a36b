#pragma once

// Random (instance, feasible point) pairs realizing one CRCQ clause or one of
// the two failure configurations. Every draw is self-checked against the
// analytic classifiers before it is returned.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "socpcq/affine_instance.hpp"
#include "socpcq/cq_checker.hpp"
#include "socpcq/oracles/sampling.hpp"
#include "socpcq/subspace_cone.hpp"

namespace socpcq::oracles {

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Stratum {
  Interior,                // Thm4.4(i)
  BoundaryNondegenerate,   // Thm4.4(ii)
  BoundaryVanishing,       // Thm4.4(iii)
  VertexMeetsInterior,     // Thm4.4(iv)
  VertexZeroOnly,          // Thm4.4(v)
  VertexLine,              // Thm4.4(vi)
  FailBoundaryDegenerate,  // grad phi = 0 at the point only
  FailVertexRay,           // Cor4.2
};

inline constexpr std::array<Stratum, 8> kAllStrata = {
    Stratum::Interior,       Stratum::BoundaryNondegenerate,  Stratum::BoundaryVanishing,
    Stratum::VertexMeetsInterior, Stratum::VertexZeroOnly,    Stratum::VertexLine,
    Stratum::FailBoundaryDegenerate, Stratum::FailVertexRay};

inline std::string_view to_string(Stratum s) {
  switch (s) {
    case Stratum::Interior: return "Thm4.4(i)";
    case Stratum::BoundaryNondegenerate: return "Thm4.4(ii)";
    case Stratum::BoundaryVanishing: return "Thm4.4(iii)";
    case Stratum::VertexMeetsInterior: return "Thm4.4(iv)";
    case Stratum::VertexZeroOnly: return "Thm4.4(v)";
    case Stratum::VertexLine: return "Thm4.4(vi)";
    case Stratum::FailBoundaryDegenerate: return "fail:Thm3.2";
    case Stratum::FailVertexRay: return "fail:Cor4.2";
  }
  return "unknown";
}

inline Stratum stratum_from_label(std::string_view s) {
  for (Stratum t : kAllStrata) {
    if (to_string(t) == s) return t;
  }
  throw InputError("unknown stratum '" + std::string(s) + "'");
}

/// Expected CRCQ verdict of the stratum.
inline bool stratum_satisfies_crcq(Stratum s) {
  return s != Stratum::FailBoundaryDegenerate && s != Stratum::FailVertexRay;
}

inline int min_cone_order(Stratum s) {
  return (s == Stratum::FailBoundaryDegenerate || s == Stratum::FailVertexRay) ? 3 : 2;
}

inline int min_dimension(Stratum s) { return s == Stratum::FailVertexRay ? 2 : 1; }

struct GeneratedInstance {
  AffineSocInstance instance;
  Vector point;
  Stratum stratum;
};

namespace detail {

inline constexpr int kGeneratorRetries = 64;

/// A point of Q_m with the given margin y0 - |y_r| and |y_r| >= 0.5.
inline Vector cone_point(Rng& rng, Eigen::Index m, double margin) {
  Vector r = rng.unit_vector(m - 1) * rng.uniform(0.5, 2.0);
  Vector y(m);
  y(0) = r.norm() + margin;
  y.tail(m - 1) = r;
  return y;
}

/// Spans the given columns through a random mixing R, so Im(A) = span(cols).
inline Matrix mix_columns(Rng& rng, const Matrix& cols, Eigen::Index n) {
  for (;;) {
    const Matrix R = rng.gaussian(cols.cols(), n);
    const Matrix A = cols * R;
    if (numeric_rank(A, 1e-6) == numeric_rank(cols, 1e-9)) return A;
  }
}

inline std::optional<GeneratedInstance> try_generate(Eigen::Index m, Eigen::Index n, Stratum s, Rng& rng) {
  const Vector xbar = rng.gaussian(n);
  Matrix A;
  Vector b;
  switch (s) {
    case Stratum::Interior: {
      A = rng.gaussian(m, n);
      b = cone_point(rng, m, 0.5 + rng.uniform()) - A * xbar;
      break;
    }
    case Stratum::BoundaryNondegenerate: {
      A = rng.gaussian(m, n);
      b = cone_point(rng, m, 0.0) - A * xbar;
      break;
    }
    case Stratum::BoundaryVanishing: {
      Vector dir(m);
      dir(0) = 1.0;
      dir.tail(m - 1) = rng.unit_vector(m - 1);
      const Vector w = rng.gaussian(n);
      const double c = 1.0 + rng.uniform() - w.dot(xbar);
      A = dir * w.transpose();
      b = c * dir;
      break;
    }
    case Stratum::VertexMeetsInterior: {
      const int k = rng.integer(1, static_cast<int>(std::min(m, n)));
      Matrix cols = rng.gaussian(m, k);
      cols.col(0) = cone_point(rng, m, 0.5);
      A = mix_columns(rng, cols, n);
      b = -A * xbar;
      break;
    }
    case Stratum::VertexZeroOnly: {
      const int k = rng.integer(1, static_cast<int>(std::min(m - 1, n)));
      const Matrix G = rng.gaussian(m - 1, k);
      const Matrix Q = Eigen::HouseholderQR<Matrix>(G).householderQ() * Matrix::Identity(m - 1, k);
      Matrix cols = Matrix::Zero(m, k);
      cols.bottomRows(m - 1) = Q;
      const Vector t = rng.unit_vector(k) * rng.uniform(0.0, 0.6);
      cols.row(0) = t.transpose();
      A = mix_columns(rng, cols, n);
      b = -A * xbar;
      break;
    }
    case Stratum::VertexLine: {
      const Vector v = rng.boundary_ray(m) * rng.uniform(0.5, 2.0);
      A = v * rng.gaussian(n).transpose();
      b = -A * xbar;
      break;
    }
    case Stratum::FailBoundaryDegenerate: {
      const Vector y = cone_point(rng, m, 0.0);
      const Vector u = y.tail(m - 1).normalized();
      const Matrix Ar = rng.gaussian(m - 1, n);
      A = Matrix(m, n);
      A.bottomRows(m - 1) = Ar;
      A.row(0) = u.transpose() * Ar;
      b = y - A * xbar;
      break;
    }
    case Stratum::FailVertexRay: {
      // v and one w in (Jv)^perp, a hyperplane meeting Q_m only along R_+ v.
      const Vector v = rng.boundary_ray(m);
      Vector Jv = v;
      Jv.tail(m - 1) = -v.tail(m - 1);
      Vector w = rng.gaussian(m);
      w -= (w.dot(Jv) / Jv.squaredNorm()) * Jv;
      Matrix cols(m, 2);
      cols.col(0) = v;
      cols.col(1) = w;
      A = mix_columns(rng, cols, n);
      b = -A * xbar;
      break;
    }
  }
  GeneratedInstance g{AffineSocInstance(A, b), xbar, s};

  // Self-check with clear margins so the clause does not hinge on tolerance.
  const Vector y = g.instance.evaluate(xbar);
  const ConeLocation loc = classify_cone_point(y);
  const double anorm = g.instance.operator_norm();
  if (anorm < 1e-3) return std::nullopt;
  switch (s) {
    case Stratum::Interior:
      if (loc != ConeLocation::Interior) return std::nullopt;
      break;
    case Stratum::BoundaryNondegenerate:
      if (loc != ConeLocation::PositiveBoundary) return std::nullopt;
      if (grad_phi(g.instance, xbar).norm() < 1e-2 * anorm) return std::nullopt;
      break;
    case Stratum::BoundaryVanishing:
      if (loc != ConeLocation::PositiveBoundary) return std::nullopt;
      if (!vanishing_reduction_test(g.instance, xbar)) return std::nullopt;
      break;
    case Stratum::FailBoundaryDegenerate: {
      if (loc != ConeLocation::PositiveBoundary) return std::nullopt;
      if (vanishing_reduction_test(g.instance, xbar)) return std::nullopt;
      const Vector dir = y.normalized();
      if ((A - dir * (dir.transpose() * A)).norm() < 1e-2 * anorm) return std::nullopt;
      break;
    }
    default: {
      if (loc != ConeLocation::Zero) return std::nullopt;
      const SubspaceConeClass c = classify_image_vs_cone(A);
      using K = SubspaceConeClass::Kind;
      if (s == Stratum::VertexMeetsInterior && !(c.kind == K::MeetsInterior && c.lambda_max > 1e-3))
        return std::nullopt;
      if (s == Stratum::VertexZeroOnly && !(c.kind == K::ZeroOnly && c.lambda_max < -1e-3))
        return std::nullopt;
      if (s == Stratum::VertexLine && !(c.kind == K::Ray && image_equals_line(A, c.ray)))
        return std::nullopt;
      if (s == Stratum::FailVertexRay && !(c.kind == K::Ray && !image_equals_line(A, c.ray)))
        return std::nullopt;
      break;
    }
  }
  const Verdict crcq = check_crcq(g.instance, xbar);
  if (crcq.holds != stratum_satisfies_crcq(s)) return std::nullopt;
  return g;
}

}  // namespace detail

inline GeneratedInstance random_instance(Eigen::Index m, Eigen::Index n, Stratum s, std::uint64_t seed) {
  if (m < 2) throw InputError("cone order m must be >= 2");
  if (n < 1) throw InputError("variable dimension n must be >= 1");
  if (m < min_cone_order(s) || n < min_dimension(s)) {
    throw GenerationError("stratum " + std::string(to_string(s)) + " needs m >= " +
                          std::to_string(min_cone_order(s)) + " and n >= " +
                          std::to_string(min_dimension(s)));
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < detail::kGeneratorRetries; ++attempt) {
    if (auto g = detail::try_generate(m, n, s, rng)) return *g;
  }
  throw GenerationError("could not realize stratum " + std::string(to_string(s)) + " after " +
                        std::to_string(detail::kGeneratorRetries) + " attempts");
}

}  // namespace socpcq::oracles
