#pragma once

// Euclidean projection onto Omega = { x : Ax + b in Q_m }.
//
// When the slice Im[A b] meets Q_m only on a proper face, a reducing
// certificate w in Q_m with A^T w = 0, b^T w = 0 exposes that face and Omega
// is polyhedral; the projection is then a least-squares step. Otherwise Slater
// holds, multipliers exist, and an ADMM iteration with KKT polishing is
// certified by the dual bound
//   dist(x, Omega)^2 >= -|A^T l|^2 - 2 <l, Ax + b>,  l in Q_m.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "socpcq/affine_instance.hpp"
#include "socpcq/cone.hpp"

namespace socpcq::oracles {

enum class ProjectionMethod { AlreadyFeasible, AffineFace, RayFace, Splitting };

inline std::string_view to_string(ProjectionMethod m) {
  switch (m) {
    case ProjectionMethod::AlreadyFeasible: return "already_feasible";
    case ProjectionMethod::AffineFace: return "affine_face";
    case ProjectionMethod::RayFace: return "ray_face";
    case ProjectionMethod::Splitting: return "splitting";
  }
  return "unknown";
}

struct ProjectionOptions {
  double tol = 1e-10;
  long max_iter = 100000;
  /// Skip facial reduction and always run the splitting iteration.
  bool force_splitting = false;
};

struct ProjectionResult {
  Vector z;
  double distance = 0.0;
  /// |x - z| minus the certified lower bound on dist(x, Omega).
  double gap = 0.0;
  long iterations = 0;
  ProjectionMethod method = ProjectionMethod::AlreadyFeasible;
};

namespace detail {

/// Singular values at or below rel * max(sigma_max, reference) are treated as zero.
inline Matrix pseudo_inverse(const Matrix& M, double reference = 0.0, double rel = 1e-12) {
  if (M.size() == 0) return Matrix::Zero(M.cols(), M.rows());
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  if (s.size() == 0) return Matrix::Zero(M.cols(), M.rows());
  const double cut = rel * std::max(s(0), reference);
  Vector inv = Vector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

inline Vector lorentz_apply(const Vector& y) {
  Vector r = -y;
  r(0) = y(0);
  return r;
}

}  // namespace detail

class FeasibleSetProjector {
 public:
  explicit FeasibleSetProjector(const AffineSocInstance& inst, ProjectionOptions opt = {})
      : inst_(inst), opt_(opt) {
    require_positive_tol(opt_.tol);
    if (opt_.max_iter < 1) throw InputError("max_iter must be >= 1");
    const Matrix& A = inst_.A();
    A_pinv_ = detail::pseudo_inverse(A);
    if (!opt_.force_splitting) detect_face();
  }

  const AffineSocInstance& instance() const noexcept { return inst_; }
  bool has_reduced_face() const noexcept { return face_ != Face::Full; }

  ProjectionResult project(const Vector& x) const { return project(x, std::max(1.0, x.norm())); }

  /// Certification is absolute at tol * scale, floored at the rounding level of g(x).
  ProjectionResult project(const Vector& x, double scale) const {
    const Vector gx = inst_.evaluate(x);
    ProjectionResult out;
    if (distance_to_cone(gx) == 0.0) {
      out.z = x;
      return out;
    }
    // Feasibility and the gap cannot be resolved below rounding in g.
    const double roundoff = 32.0 * std::numeric_limits<double>::epsilon() *
                            (1.0 + (inst_.operator_norm() + 1.0) * x.norm() + inst_.b().norm());
    const double budget = std::max(opt_.tol * scale, roundoff);
    if (face_ == Face::Affine) {
      if (exact(x, x - A_pinv_ * gx, ProjectionMethod::AffineFace, budget, out)) return out;
    } else if (face_ == Face::Ray) {
      const Vector rf = face_perp_ * gx;
      Vector z = x - face_pinv_ * rf;
      if (face_dir_.dot(inst_.evaluate(z)) < 0.0) z = x - A_pinv_ * gx;
      if (exact(x, z, ProjectionMethod::RayFace, budget, out)) return out;
    }
    return split(x, gx, budget);
  }

 private:
  enum class Face { Full, Affine, Ray };

  // Look for w = (1, s) with P w = 0, P = [A^T; b^T]. |s| < 1 exposes {0},
  // |s| = 1 exposes the ray through (1, -s).
  void detect_face() {
    const Matrix& A = inst_.A();
    const Eigen::Index m = inst_.cone_order();
    const Eigen::Index n = inst_.dimension();
    Matrix P(n + 1, m);
    P.topRows(n) = A.transpose();
    P.row(n) = inst_.b().transpose();
    const double scale = std::max(1.0, P.norm());
    const Vector c0 = P.col(0);
    const Matrix C = P.rightCols(m - 1);
    const Vector s = -(detail::pseudo_inverse(C, scale) * c0);
    const double residual = (c0 + C * s).norm();
    if (residual > 1e-10 * scale) return;
    const double ns = s.norm();
    constexpr double kFaceTol = 1e-9;
    if (ns < 1.0 - kFaceTol) {
      face_ = Face::Affine;
      return;
    }
    if (ns > 1.0 + kFaceTol) return;
    face_dir_ = Vector(m);
    face_dir_(0) = 1.0;
    face_dir_.tail(m - 1) = -s / ns;
    face_dir_ /= std::sqrt(2.0);
    face_perp_ = Matrix::Identity(m, m) - face_dir_ * face_dir_.transpose();
    face_pinv_ = detail::pseudo_inverse(face_perp_ * A, inst_.operator_norm(), 1e-10);
    face_ = Face::Ray;
  }

  bool exact(const Vector& x, const Vector& z, ProjectionMethod method, double budget,
             ProjectionResult& out) const {
    if (distance_to_cone(inst_.evaluate(z)) > budget) return false;
    out.z = z;
    out.distance = (x - z).norm();
    out.gap = 0.0;
    out.method = method;
    return true;
  }

  // Returns the duality gap of (z, l), or +inf if z is not feasible within budget.
  double certify(const Vector& x, const Vector& gx, const Vector& z, const Vector& lambda,
                 double budget) const {
    if (!z.allFinite() || !lambda.allFinite()) return std::numeric_limits<double>::infinity();
    if (distance_to_cone(inst_.evaluate(z)) > budget) return std::numeric_limits<double>::infinity();
    const Vector l = project_to_cone(lambda);
    const double dual = -0.5 * (inst_.A().transpose() * l).squaredNorm() - l.dot(gx);
    const double lower = std::sqrt(std::max(0.0, 2.0 * dual));
    return (x - z).norm() - lower;
  }

  // Newton on z - x - mu A^T J y = 0, y^T J y / 2 = 0 with y = Az + b on bd+.
  bool polish_boundary(const Vector& x, Vector& z, const Vector& lambda_hat, Vector& lambda) const {
    const Matrix& A = inst_.A();
    const Eigen::Index n = inst_.dimension();
    Vector y = inst_.evaluate(z);
    if (y.norm() == 0.0) return false;
    double mu = std::max(0.0, lambda_hat.dot(detail::lorentz_apply(y)) / y.squaredNorm());
    const Matrix JA = [&] {
      Matrix M = -A;
      M.row(0) = A.row(0);
      return M;
    }();
    const Matrix AtJA = A.transpose() * JA;
    Matrix K(n + 1, n + 1);
    Vector F(n + 1);
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 30; ++it) {
      y = inst_.evaluate(z);
      const Vector Jy = detail::lorentz_apply(y);
      const Vector AtJy = A.transpose() * Jy;
      F.head(n) = z - x - mu * AtJy;
      F(n) = 0.5 * y.dot(Jy);
      const double res = F.norm();
      if (!(res < last) && it > 3) break;
      last = res;
      if (res <= 1e-15 * std::max(1.0, x.norm())) break;
      K.topLeftCorner(n, n) = Matrix::Identity(n, n) - mu * AtJA;
      K.topRightCorner(n, 1) = -AtJy;
      K.bottomLeftCorner(1, n) = AtJy.transpose();
      K(n, n) = 0.0;
      Eigen::FullPivLU<Matrix> lu(K);
      if (!lu.isInvertible()) return false;
      const Vector step = lu.solve(-F);
      z += step.head(n);
      mu += step(n);
    }
    y = inst_.evaluate(z);
    if (!(mu >= 0.0) || !(y(0) > 0.0) || !z.allFinite()) return false;
    lambda = mu * detail::lorentz_apply(y);
    return true;
  }

  // z = x - A^+ g(x), with the kernel part of the multiplier taken from the iterate.
  void polish_vertex(const Vector& x, const Vector& gx, const Vector& lambda_hat, Vector& z,
                     Vector& lambda) const {
    const Matrix& A = inst_.A();
    z = x - A_pinv_ * gx;
    const Vector image_part = A_pinv_.transpose() * (z - x);
    const Vector kernel_part = lambda_hat - A * (A_pinv_ * lambda_hat);
    lambda = image_part + kernel_part;
  }

  ProjectionResult split(const Vector& x, const Vector& gx, double budget) const {
    const Matrix& A = inst_.A();
    const Vector& b = inst_.b();
    const Eigen::Index n = inst_.dimension();
    const Matrix AtA = A.transpose() * A;
    const double anorm = inst_.operator_norm();
    double rho = anorm > 0.0 ? 1.0 / (anorm * anorm) : 1.0;
    Eigen::LDLT<Matrix> ldlt(Matrix::Identity(n, n) + rho * AtA);

    Vector z = x;
    Vector y = project_to_cone(gx);
    Vector u = Vector::Zero(inst_.cone_order());
    ProjectionResult best;
    best.gap = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vector& zc, const Vector& lc, long it) {
      const double gap = certify(x, gx, zc, lc, budget);
      if (gap < best.gap) {
        best.gap = gap;
        best.z = zc;
        best.iterations = it;
      }
      return gap <= budget;
    };

    long next_polish = 4;
    for (long it = 1; it <= opt_.max_iter; ++it) {
      z = ldlt.solve(x + rho * A.transpose() * (y - b - u));
      const Vector Az = A * z + b;
      const Vector y_old = y;
      y = project_to_cone(Az + u);
      const Vector r = Az - y;
      u += r;

      if (it == next_polish || it % 500 == 0) {
        next_polish *= 2;
        const Vector lambda_hat = -rho * u;
        if (consider(z, lambda_hat, it)) break;
        Vector zp = z;
        Vector lp;
        if (polish_boundary(x, zp, lambda_hat, lp) && consider(zp, lp, it)) break;
        polish_vertex(x, gx, lambda_hat, zp, lp);
        if (consider(zp, lp, it)) break;
      }

      if (it % 25 == 0) {
        const double pr = r.norm();
        const double dr = rho * (A.transpose() * (y - y_old)).norm();
        double factor = 1.0;
        if (pr > 10.0 * dr) factor = 2.0;
        else if (dr > 10.0 * pr) factor = 0.5;
        if (factor != 1.0) {
          rho *= factor;
          u /= factor;
          ldlt.compute(Matrix::Identity(n, n) + rho * AtA);
        }
      }
    }
    if (!(best.gap <= budget)) {
      throw NumericalFailure("projection did not certify within " + std::to_string(opt_.max_iter) +
                                 " iterations; last duality gap " + std::to_string(best.gap),
                             best.gap);
    }
    best.distance = (x - best.z).norm();
    best.method = ProjectionMethod::Splitting;
    return best;
  }

  AffineSocInstance inst_;
  ProjectionOptions opt_;
  Matrix A_pinv_;
  Face face_ = Face::Full;
  Vector face_dir_;
  Matrix face_perp_;
  Matrix face_pinv_;
};

inline ProjectionResult project_to_feasible_set(const AffineSocInstance& inst, const Vector& x,
                                                double tol = 1e-10, long max_iter = 100000) {
  ProjectionOptions opt;
  opt.tol = tol;
  opt.max_iter = max_iter;
  return FeasibleSetProjector(inst, opt).project(x);
}

}  // namespace socpcq::oracles
