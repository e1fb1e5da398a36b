#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <random>

#include "socpcq/cone.hpp"

namespace socpcq::oracles {

/// splitmix64 finalizer; per-trial and per-radius streams are derived by counter.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  double normal() { return normal_(engine_); }

  Vector gaussian(Eigen::Index n) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    return v;
  }

  Matrix gaussian(Eigen::Index rows, Eigen::Index cols) {
    Matrix M(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = normal();
    return M;
  }

  Vector unit_vector(Eigen::Index n) {
    Vector v = gaussian(n);
    while (v.norm() < 1e-12) v = gaussian(n);
    return v / v.norm();
  }

  /// Uniform in the closed ball of the given radius: Gaussian direction, radius r * U^{1/n}.
  Vector ball(Eigen::Index n, double radius) {
    const double s = radius * std::pow(uniform(), 1.0 / static_cast<double>(n));
    return s * unit_vector(n);
  }

  /// Random point of bd+(Q_m), scaled so |v| = 1.
  Vector boundary_ray(Eigen::Index m) {
    Vector v(m);
    v(0) = 1.0;
    v.tail(m - 1) = unit_vector(m - 1);
    return v / std::sqrt(2.0);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace socpcq::oracles
