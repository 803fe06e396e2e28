// Copyright 2026 The lqglearn Authors
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

#ifndef LQGLEARN_RNG_HPP_
#define LQGLEARN_RNG_HPP_

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace lqg {

// Counter-based Gaussian streams. Every draw is a pure function of
// (seed, kind, step, counter), so trajectories and generator passes are
// reproducible regardless of execution order or parallelism.
enum class StreamKind : std::uint64_t {
  kInitState = 1,
  kProcessNoise = 2,
  kObsNoise = 3,
  kControl = 4,
  kGenA = 10,
  kGenB = 11,
  kGenC = 12,
  kGenQ = 13,
  kGenR = 14,
  kGenSigmaW = 15,
  kGenSigmaV = 16,
  kGenSigma0 = 17,
  kMisc = 99,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

}  // namespace detail

// Derives the per-trajectory seed from (master_seed, trajectory index).
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return detail::mix(master_seed, index);
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, StreamKind kind, std::uint64_t step = 0)
      : key_(detail::mix(detail::mix(seed, static_cast<std::uint64_t>(kind)), step)) {}

  // Uniform draw in the open interval (0, 1).
  double uniform() {
    const std::uint64_t bits = detail::mix(key_, counter_++);
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    cached_ = r * std::sin(phi);
    have_cached_ = true;
    return r * std::cos(phi);
  }

  Eigen::VectorXd normal_vector(Eigen::Index d) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = normal();
    return v;
  }

  Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    // Column-major fill, fixed order.
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal();
    return m;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace lqg

#endif  // LQGLEARN_RNG_HPP_
