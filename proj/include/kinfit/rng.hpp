// Copyright 2026 The kinfit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KINFIT_RNG_HPP
#define KINFIT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace kinfit {

/// mt19937_64 with hand-rolled uniform/gaussian draws so sampled values do
/// not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  /// splitmix64-style mixing for derived sub-seeds (per scene, per trial),
  /// keeping parallel generation schedule independent.
  static uint64_t mix(uint64_t seed, uint64_t salt) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  double gaussian(double sigma) {
    // Box-Muller, one value per call
    double u1;
    do {
      u1 = uniform(0.0, 1.0);
    } while (u1 <= 0.0);
    const double u2 = uniform(0.0, 1.0);
    return sigma * std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  Eigen::Vector3d uniform_box(const Eigen::Vector3d& lo,
                              const Eigen::Vector3d& hi) {
    return {uniform(lo.x(), hi.x()), uniform(lo.y(), hi.y()),
            uniform(lo.z(), hi.z())};
  }

  Eigen::Vector3d gaussian_vector(double sigma) {
    return {gaussian(sigma), gaussian(sigma), gaussian(sigma)};
  }

  Eigen::Vector3d unit_vector() {
    Eigen::Vector3d v;
    double n2;
    do {
      v = uniform_box({-1, -1, -1}, {1, 1, 1});
      n2 = v.squaredNorm();
    } while (n2 < 1e-6 || n2 > 1.0);
    return v / std::sqrt(n2);
  }

  uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kinfit

#endif  // KINFIT_RNG_HPP
