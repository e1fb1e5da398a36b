#pragma once

// Sampled face dimensions dim grad G(x)^*(F^perp) near a feasible point, for
// the faces F of the reduced cone C.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "socpcq/affine_instance.hpp"
#include "socpcq/oracles/sampling.hpp"
#include "socpcq/subspace_cone.hpp"

namespace socpcq::oracles {

struct DimScan {
  enum class Face { ZeroFace, FullCone, SampledRay };
  Face face = Face::ZeroFace;
  int ray_index = -1;  // SampledRay only
  std::set<int> observed_dims;
  long sample_count = 0;
  long discarded = 0;
  std::uint64_t seed = 0;

  bool constant() const { return observed_dims.size() <= 1; }
  std::string label() const {
    switch (face) {
      case Face::ZeroFace: return "ZeroFace";
      case Face::FullCone: return "FullCone";
      case Face::SampledRay: return "SampledRay(" + std::to_string(ray_index) + ")";
    }
    return "unknown";
  }
};

inline bool fcr_consistent(const std::vector<DimScan>& scans) {
  for (const auto& s : scans) {
    if (!s.constant()) return false;
  }
  return true;
}

inline constexpr int kSampledRayFaces = 8;

namespace detail {

/// Central differences of g; exact for affine maps up to rounding.
inline Matrix jacobian_fd(const AffineSocInstance& inst, const Vector& x, double h = 1e-3) {
  Matrix J(inst.cone_order(), inst.dimension());
  for (Eigen::Index j = 0; j < inst.dimension(); ++j) {
    Vector e = Vector::Zero(inst.dimension());
    e(j) = h;
    J.col(j) = (inst.evaluate(x + e) - inst.evaluate(x - e)) / (2.0 * h);
  }
  return J;
}

}  // namespace detail

/// The point xbar itself is the first sample. Dimensions use rank threshold tol * |A|.
inline std::vector<DimScan> fcr_dim_scan(const AffineSocInstance& inst, const Vector& xbar,
                                         double radius, long samples, std::uint64_t seed,
                                         double tol = kDefaultTol) {
  const PointAnalysis pa = analyze_point(inst, xbar, tol);
  if (!(radius > 0.0)) throw InputError("radius must be positive");
  if (samples < 1) throw InputError("samples must be >= 1");
  Rng rng(seed);
  const Eigen::Index n = inst.dimension();
  const double rank_tol = tol * std::max(1.0, inst.operator_norm());
  std::vector<DimScan> out;

  auto make = [&](DimScan::Face f, int idx = -1) {
    DimScan d;
    d.face = f;
    d.ray_index = idx;
    d.seed = seed;
    return d;
  };

  switch (pa.reduction.kind) {
    case ReductionInfo::Kind::InteriorCase: {
      DimScan d = make(DimScan::Face::ZeroFace);
      for (long s = 0; s < samples; ++s) d.observed_dims.insert(0);
      d.sample_count = samples;
      out.push_back(d);
      break;
    }
    case ReductionInfo::Kind::BoundaryCase: {
      DimScan zero = make(DimScan::Face::ZeroFace);
      DimScan full = make(DimScan::Face::FullCone);
      for (long s = 0; s < samples; ++s) {
        const Vector x = s == 0 ? xbar : Vector(xbar + rng.ball(n, radius));
        Vector g;
        try {
          g = grad_phi(inst, x, tol);
        } catch (const SingularReductionError&) {
          ++zero.discarded;
          ++full.discarded;
          continue;
        }
        zero.observed_dims.insert(g.norm() > rank_tol ? 1 : 0);
        full.observed_dims.insert(0);
        ++zero.sample_count;
        ++full.sample_count;
      }
      out.push_back(zero);
      out.push_back(full);
      break;
    }
    case ReductionInfo::Kind::ZeroCase: {
      const Eigen::Index m = inst.cone_order();
      std::vector<Matrix> ray_perp;
      for (int k = 0; k < kSampledRayFaces; ++k) {
        const Vector v = rng.boundary_ray(m);
        ray_perp.push_back(Matrix::Identity(m, m) - v * v.transpose());
      }
      DimScan zero = make(DimScan::Face::ZeroFace);
      DimScan full = make(DimScan::Face::FullCone);
      std::vector<DimScan> rays;
      for (int k = 0; k < kSampledRayFaces; ++k) rays.push_back(make(DimScan::Face::SampledRay, k));
      for (long s = 0; s < samples; ++s) {
        const Vector x = s == 0 ? xbar : Vector(xbar + rng.ball(n, radius));
        const Matrix J = detail::jacobian_fd(inst, x);
        zero.observed_dims.insert(numeric_rank(J, tol));
        full.observed_dims.insert(0);
        for (int k = 0; k < kSampledRayFaces; ++k) {
          rays[k].observed_dims.insert(numeric_rank(ray_perp[k] * J, tol));
          ++rays[k].sample_count;
        }
        ++zero.sample_count;
        ++full.sample_count;
      }
      out.push_back(zero);
      out.push_back(full);
      for (auto& r : rays) out.push_back(r);
      break;
    }
  }
  return out;
}

}  // namespace socpcq::oracles
