#pragma once

// Sampled error-bound modulus: max dist(x, Omega) / dist(g(x), Q_m) over x
// drawn uniformly from balls around a feasible point.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "socpcq/affine_instance.hpp"
#include "socpcq/oracles/projection.hpp"
#include "socpcq/oracles/sampling.hpp"

namespace socpcq::oracles {

/// Ratios are taken only where dist(g(x), Q_m) exceeds this.
inline constexpr double kDenominatorFloor = 1e-12;

struct KappaScan {
  std::vector<double> radii;
  std::vector<double> kappa_hat;
  /// Per radius: samples drawn, samples feasible, samples under the denominator floor.
  std::vector<long> samples;
  std::vector<long> discarded;
  std::vector<long> floored;
  long sample_count = 0;
  std::uint64_t seed = 0;
};

enum class Growth { Bounded, Growing, Inconclusive };

inline std::string_view to_string(Growth g) {
  switch (g) {
    case Growth::Bounded: return "bounded";
    case Growth::Growing: return "growing";
    case Growth::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

struct GrowthClass {
  Growth growth = Growth::Inconclusive;
  /// kappa_hat(finest) / kappa_hat(second finest); 0 when both vanish.
  double ratio = 0.0;
};

inline constexpr double kBoundedRatio = 2.0;
inline constexpr double kGrowingRatio = 10.0;

/// Compares the two finest radii. A vanishing modulus is bounded.
inline GrowthClass classify_growth(const KappaScan& scan) {
  GrowthClass g;
  const std::size_t k = scan.kappa_hat.size();
  if (k < 2) return g;
  const double fine = scan.kappa_hat[k - 1];
  const double coarse = scan.kappa_hat[k - 2];
  if (coarse == 0.0) {
    g.ratio = fine == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    g.ratio = fine / coarse;
  }
  if (g.ratio <= kBoundedRatio) g.growth = Growth::Bounded;
  else if (g.ratio >= kGrowingRatio) g.growth = Growth::Growing;
  return g;
}

inline void require_decreasing_radii(const std::vector<double>& radii) {
  if (radii.empty()) throw InputError("at least one radius is required");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !std::isfinite(radii[i])) throw InputError("radii must be positive");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw InputError("radii must be strictly decreasing");
  }
}

/// Radius i uses the stream derive_seed(seed, i), so radii are independent.
inline KappaScan mscq_kappa_scan(const FeasibleSetProjector& projector, const Vector& xbar,
                                 const std::vector<double>& radii, long samples_per_radius,
                                 std::uint64_t seed, double tol = kDefaultTol) {
  const AffineSocInstance& inst = projector.instance();
  analyze_point(inst, xbar, tol);
  require_decreasing_radii(radii);
  if (samples_per_radius < 1) throw InputError("samples_per_radius must be >= 1");

  KappaScan scan;
  scan.radii = radii;
  scan.seed = seed;
  scan.sample_count = samples_per_radius;
  const Eigen::Index n = inst.dimension();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    Rng rng(derive_seed(seed, i));
    double best = 0.0;
    long feasible = 0;
    long floored = 0;
    for (long s = 0; s < samples_per_radius; ++s) {
      const Vector step = rng.ball(n, radii[i]);
      const Vector x = xbar + step;
      const double den = distance_to_cone(inst.evaluate(x));
      if (den == 0.0) {
        ++feasible;
        continue;
      }
      if (den <= kDenominatorFloor) {
        ++floored;
        continue;
      }
      ProjectionResult p;
      try {
        p = projector.project(x, std::max(step.norm(), kDenominatorFloor));
      } catch (const NumericalFailure& e) {
        throw NumericalFailure("kappa scan: projection failed at radius " + std::to_string(radii[i]) +
                                   ", sample " + std::to_string(s) + ": " + e.what(),
                               e.residual());
      }
      best = std::max(best, p.distance / den);
    }
    scan.kappa_hat.push_back(best);
    scan.samples.push_back(samples_per_radius);
    scan.discarded.push_back(feasible);
    scan.floored.push_back(floored);
  }
  return scan;
}

inline KappaScan mscq_kappa_scan(const AffineSocInstance& inst, const Vector& xbar,
                                 const std::vector<double>& radii, long samples_per_radius,
                                 std::uint64_t seed, double tol = kDefaultTol) {
  return mscq_kappa_scan(FeasibleSetProjector(inst), xbar, radii, samples_per_radius, seed, tol);
}

}  // namespace socpcq::oracles
