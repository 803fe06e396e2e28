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

#ifndef LQGLEARN_NORMALIZATION_HPP_
#define LQGLEARN_NORMALIZATION_HPP_

#include <vector>

#include "lqg/linalg.hpp"
#include "lqg/system.hpp"

namespace lqg {

// The primed parameterization of the paper: states re-expressed as
// x'_t = Qbar_t^{1/2} x_t so that the cost-observability Gramians of the
// transformed system are identity.
struct NormalizedSystem {
  LqgSystem system;
  std::vector<Matrix> forward;  // Qbar_t^{1/2}, t = 0..T
  std::vector<Matrix> inverse;  // Qbar_t^{-1/2}
};

// A' = F_{t+1} A F_t^{-1}, B' = F_{t+1} B, C' = C F_t^{-1},
// Q' = F_t^{-1} Q F_t^{-1}, Sigma_w' = F_{t+1} Sigma_w F_{t+1},
// Sigma_0' = F_0 Sigma_0 F_0 with F_t = Qbar_t^{1/2}; R and Sigma_v unchanged.
NormalizedSystem normalize(const LqgSystem& sys, Eigen::Index ell, Eigen::Index m);

struct NormalizationReport {
  double max_gramian_deviation = 0.0;  // max_t |Qbar'_t - I|_2
  double max_roundtrip_deviation = 0.0;  // max_t |forward_t inverse_t - I|_2
};

NormalizationReport verify_normalization(const NormalizedSystem& ns, Eigen::Index ell,
                                         Eigen::Index m);

}  // namespace lqg

#endif  // LQGLEARN_NORMALIZATION_HPP_
