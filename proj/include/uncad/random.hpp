// Copyright 2026 The UncAD Selection Authors
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

#ifndef UNCAD__RANDOM_HPP_
#define UNCAD__RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>

namespace uncad
{

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Per-scenario seed of a suite: mix64(master ^ index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
  return mix64(master ^ index);
}

/**
 * Seeded generator with a platform-independent output sequence.
 *
 * std::mt19937_64 is fully specified by the standard; the distribution
 * helpers here are written out so results do not depend on the standard
 * library's distribution implementations.
 */
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi)
  {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Zero-mean Laplace sample with the given scale (inverse CDF).
  double laplace(double scale)
  {
    if (scale == 0.0) {
      return 0.0;
    }
    double u = uniform() - 0.5;
    while (u == -0.5) {
      u = uniform() - 0.5;
    }
    const double mag = -scale * std::log1p(-2.0 * std::abs(u));
    return u < 0.0 ? -mag : mag;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace uncad

#endif  // UNCAD__RANDOM_HPP_
