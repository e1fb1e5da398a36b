#include <gtest/gtest.h>

#include <cmath>

#include "socpcq/oracles/brute_force.hpp"
#include "socpcq/subspace_cone.hpp"
#include "support.hpp"

using namespace socpcq;
using socpcq::support::vec;
using Kind = SubspaceConeClass::Kind;

namespace {

Matrix columns(std::initializer_list<Vector> cols) {
  Matrix M(cols.begin()->size(), static_cast<Eigen::Index>(cols.size()));
  Eigen::Index j = 0;
  for (const auto& c : cols) M.col(j++) = c;
  return M;
}

const Matrix kZeroOnlyPair = columns({vec({0, 1, 0}), vec({0, 0, 1})});

/// Same sign convention as the classifier: first coordinate nonnegative.
double ray_error(const Vector& got, const Vector& want) {
  const Vector w = want(0) < 0 ? Vector(-want.normalized()) : Vector(want.normalized());
  return (got - w).norm();
}

}  // namespace

TEST(NumericRank, Examples) {
  EXPECT_EQ(numeric_rank(Matrix::Zero(3, 3)), 0);
  EXPECT_EQ(numeric_rank(Matrix::Identity(3, 3)), 3);
  EXPECT_EQ(numeric_rank(support::degenerate_boundary_matrix()), 2);
  EXPECT_EQ(numeric_rank(Matrix(0, 0)), 0);
}

TEST(NumericRank, RelativeThreshold) {
  Matrix D = Matrix::Zero(3, 3);
  D.diagonal() << 1e6, 1.0, 1e-5;
  EXPECT_EQ(numeric_rank(D), 2);
  EXPECT_EQ(numeric_rank(D, 1e-12), 3);
  EXPECT_EQ(numeric_rank(D, 1e-5), 1);
}

TEST(ImageBasis, Examples) {
  const Matrix I = image_basis(Matrix::Identity(3, 3));
  EXPECT_EQ(I.cols(), 3);
  EXPECT_LT((I.transpose() * I - Matrix::Identity(3, 3)).norm(), 1e-12);

  const Matrix B = image_basis(support::vertex_ray_plane_matrix());
  ASSERT_EQ(B.cols(), 2);
  // Projector onto the span is basis independent.
  Matrix P = Matrix::Zero(3, 3);
  P(0, 0) = P(0, 1) = P(1, 0) = P(1, 1) = 0.5;
  P(2, 2) = 1.0;
  EXPECT_LT((B * B.transpose() - P).norm(), 1e-12);

  EXPECT_EQ(image_basis(Matrix::Zero(3, 2)).cols(), 0);
}

TEST(ImageBasis, OrthonormalAndInColumnSpace) {
  oracles::Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index m = rng.integer(2, 6);
    const Eigen::Index n = rng.integer(1, 6);
    const Eigen::Index k = rng.integer(1, static_cast<int>(std::min(m, n)));
    const Matrix A = rng.gaussian(m, k) * rng.gaussian(k, n);
    const Matrix B = image_basis(A);
    ASSERT_EQ(B.cols(), numeric_rank(A));
    EXPECT_LT((B.transpose() * B - Matrix::Identity(B.cols(), B.cols())).norm(), 1e-12);
    const Matrix coeffs = A.colPivHouseholderQr().solve(B);
    EXPECT_LT((A * coeffs - B).norm(), 1e-9);
  }
}

TEST(ClassifyImageVsCone, Examples) {
  const auto plane = classify_image_vs_cone(support::vertex_ray_plane_matrix());
  ASSERT_EQ(plane.kind, Kind::Ray);
  EXPECT_LT(ray_error(plane.ray, vec({1, 1, 0})), 1e-12);

  const auto line = classify_image_vs_cone(support::vertex_ray_line_matrix());
  ASSERT_EQ(line.kind, Kind::Ray);
  EXPECT_LT(ray_error(line.ray, vec({1, -1, 0})), 1e-12);

  EXPECT_EQ(classify_image_vs_cone(Matrix::Identity(3, 3)).kind, Kind::MeetsInterior);
  const auto zero_only = classify_image_vs_cone(kZeroOnlyPair);
  EXPECT_EQ(zero_only.kind, Kind::ZeroOnly);
  EXPECT_FALSE(zero_only.marginal);
  EXPECT_EQ(classify_image_vs_cone(Matrix::Zero(3, 2)).kind, Kind::ZeroOnly);
  EXPECT_THROW(classify_image_vs_cone(Matrix::Ones(1, 2)), InputError);
}

TEST(ClassifyImageVsCone, RayInvariants) {
  oracles::Rng rng(19);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index m = rng.integer(2, 6);
    const Eigen::Index n = rng.integer(1, 6);
    const Eigen::Index k = rng.integer(1, static_cast<int>(std::min(m - 1, n)));
    const auto r = support::ray_matrix(rng, m, n, k);
    const auto c = classify_image_vs_cone(r.A);
    ASSERT_EQ(c.kind, Kind::Ray);
    EXPECT_NEAR(c.ray.norm(), 1.0, 1e-12);
    EXPECT_GT(c.ray(0), 0.0);
    EXPECT_LE(std::abs(cone_margin(c.ray)), 1e-9);
    const Matrix B = image_basis(r.A);
    EXPECT_LE((c.ray - B * (B.transpose() * c.ray)).norm(), 1e-9);
  }
}

TEST(ClassifyImageVsCone, RayIsUnique) {
  oracles::Rng rng(23);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Index m = rng.integer(2, 6);
    const Eigen::Index n = rng.integer(1, 6);
    const Eigen::Index k = rng.integer(1, static_cast<int>(std::min(m - 1, n)));
    const auto r = support::ray_matrix(rng, m, n, k);
    const Matrix B = image_basis(r.A);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(restricted_lorentz_form(B));
    int null_dim = 0;
    for (Eigen::Index j = 0; j < eig.eigenvalues().size(); ++j) {
      if (std::abs(eig.eigenvalues()(j)) <= kDefaultTol) ++null_dim;
    }
    EXPECT_EQ(null_dim, 1);
  }
}

TEST(ClassifyImageVsCone, InvariantUnderColumnMixing) {
  oracles::Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index m = rng.integer(2, 6);
    const Eigen::Index n = rng.integer(1, 6);
    Matrix A;
    if (i % 2 == 0) {
      const Eigen::Index k = rng.integer(1, static_cast<int>(std::min(m - 1, n)));
      A = support::ray_matrix(rng, m, n, k).A;
    } else {
      A = rng.gaussian(m, n);
      A.row(0) *= rng.uniform(0.0, 1.0);
    }
    Matrix C = rng.gaussian(n, n);
    while (Eigen::JacobiSVD<Matrix>(C).singularValues()(n - 1) < 1e-2) C = rng.gaussian(n, n);
    const auto a = classify_image_vs_cone(A);
    const auto b = classify_image_vs_cone(A * C);
    if (std::abs(a.lambda_max) < 1e-6 && a.kind != Kind::Ray) continue;
    ASSERT_EQ(a.kind, b.kind);
    if (a.kind == Kind::Ray) EXPECT_LT((a.ray - b.ray).norm(), 1e-8);
  }
}

TEST(ClassifyImageVsCone, WitnessIsInterior) {
  oracles::Rng rng(31);
  int seen = 0;
  for (int i = 0; i < 300; ++i) {
    const Matrix A = rng.gaussian(rng.integer(2, 6), rng.integer(1, 6));
    const auto c = classify_image_vs_cone(A);
    if (c.kind != Kind::MeetsInterior) continue;
    ++seen;
    EXPECT_GT(c.witness(0), 0.0);
    EXPECT_GT(cone_margin(c.witness), 0.0);
  }
  EXPECT_GT(seen, 50);
}

TEST(ClassifyImageVsCone, AgreesWithBruteForce) {
  oracles::Rng rng(37);
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    Matrix A = rng.gaussian(rng.integer(2, 6), rng.integer(1, 6));
    A.row(0) *= rng.uniform(0.0, 1.5);
    const auto c = classify_image_vs_cone(A);
    if (std::abs(c.lambda_max) < 10 * kDefaultTol) continue;
    ++compared;
    const auto o = oracles::brute_force_subspace_class(A, 2000, 200, static_cast<std::uint64_t>(i));
    EXPECT_EQ(c.kind, o.kind) << "trial " << i << " lambda_max " << c.lambda_max << " oracle " << o.lambda_max;
  }
  EXPECT_GT(compared, 150);
}

TEST(BruteForce, Examples) {
  const auto plane = oracles::brute_force_subspace_class(support::vertex_ray_plane_matrix());
  ASSERT_EQ(plane.kind, Kind::Ray);
  EXPECT_LT(ray_error(plane.ray, vec({1, 1, 0})), 1e-4);
  EXPECT_EQ(oracles::brute_force_subspace_class(Matrix::Identity(3, 3)).kind, Kind::MeetsInterior);
  EXPECT_EQ(oracles::brute_force_subspace_class(kZeroOnlyPair).kind, Kind::ZeroOnly);
}

TEST(ImageEqualsLine, Examples) {
  EXPECT_TRUE(image_equals_line(support::vertex_ray_line_matrix(), vec({1, -1, 0})));
  EXPECT_TRUE(image_equals_line(support::vertex_ray_line_matrix(), vec({-2, 2, 0})));
  EXPECT_FALSE(image_equals_line(support::vertex_ray_plane_matrix(), vec({1, 1, 0})));
  EXPECT_FALSE(image_equals_line(Matrix::Zero(3, 2), vec({1, 1, 0})));
  EXPECT_FALSE(image_equals_line(support::vertex_ray_line_matrix(), vec({1, 1, 0})));
}

TEST(ImageEqualsLine, Errors) {
  EXPECT_THROW(image_equals_line(support::vertex_ray_line_matrix(), Vector::Zero(3)), InputError);
  EXPECT_THROW(image_equals_line(support::vertex_ray_line_matrix(), Vector::Ones(2)), InputError);
}
