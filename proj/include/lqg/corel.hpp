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

#ifndef LQGLEARN_COREL_HPP_
#define LQGLEARN_COREL_HPP_

#include <vector>

#include "lqg/linalg.hpp"
#include "lqg/system.hpp"

namespace lqg {

struct CorelConfig {
  Eigen::Index d_x = 0;  // latent dimension, assumed known
  Eigen::Index ell = 1;  // controllability window
  Eigen::Index m = 1;    // cost-observability window
  // Truncation threshold. When theta < 0 (default), the automatic rule
  // theta = c_theta (ell (d_y + d_u))^{1/2} d_x^{3/4} n^{-1/4} is used.
  double theta = -1.0;
  double c_theta = 0.5;
  double rel_tol = 1e-10;

  double resolve_theta(Eigen::Index d_y, Eigen::Index d_u, Eigen::Index n) const;
};

struct StepDiagnostics {
  double n_hat_fro = 0.0;  // |N_hat_t|_F
  double b_hat = 0.0;
  Eigen::Index kept_rank = 0;  // nonzero singular values after truncation
};

struct StateRepresentation {
  std::vector<Matrix> M;      // t = 0..T, d_x x ((t+1) d_y + t d_u)
  std::vector<Matrix> N_hat;  // fitted quadratics, kept for diagnostics
  std::vector<StepDiagnostics> diag;
  double theta = 0.0;
  Eigen::Index n = 0;
};

struct LatentDataset {
  std::vector<std::vector<Vector>> z;  // [t][i], d_x vectors, t = 0..T
  std::vector<std::vector<Vector>> u;  // [t][i], t = 0..T-1
  std::vector<std::vector<double>> c;  // [t][i], t = 0..T
};

// Stacked history h_t = [y_{0:t}; u_{0:(t-1)}] of dimension (t+1)d_y + t d_u.
Vector build_history(const LearnerView& view, Eigen::Index t);

// Algorithm 2 (CoReL): per t, regress cumulative targets on svec(h h^T),
// factor the fitted quadratic to rank d_x, truncate singular values below
// theta for t < ell, and emit latent states z_t = M_t h_t.
std::pair<StateRepresentation, LatentDataset> corel(const Dataset& ds,
                                                    const CorelConfig& cfg,
                                                    const std::vector<Matrix>& R);

// Spectral-gap rank discovery from the fitted quadratics at t >= ell
// (diagnostic; the main path takes d_x as an input).
Eigen::Index discover_rank(const std::vector<Matrix>& N_hats);

}  // namespace lqg

#endif  // LQGLEARN_COREL_HPP_
