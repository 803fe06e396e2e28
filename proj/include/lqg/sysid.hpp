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

#ifndef LQGLEARN_SYSID_HPP_
#define LQGLEARN_SYSID_HPP_

#include <vector>

#include "lqg/corel.hpp"
#include "lqg/linalg.hpp"
#include "lqg/oracle.hpp"
#include "lqg/system.hpp"

namespace lqg {

struct LatentModel {
  std::vector<Matrix> A;  // t = 0..T-1, d_x x d_x
  std::vector<Matrix> B;  // t = 0..T-1, d_x x d_u
  std::vector<Matrix> Q;  // t = 0..T, PSD by construction
  std::vector<Matrix> R;  // known true control costs, carried through
};

struct Controller {
  std::vector<Matrix> K;  // t = 0..T-1, d_u x d_x
  std::vector<Matrix> P;  // planning value matrices, t = 0..T
};

// Eq.-(7) regressions: per t, min-norm least squares of z_{t+1} on [z_t; u_t],
// split into (A_t, B_t).
std::pair<std::vector<Matrix>, std::vector<Matrix>> fit_dynamics(
    const LatentDataset& lds, double rel_tol = 1e-10);

// Eq.-(8) cost fits: Q_t = I for t < ell and t = T; otherwise a quadratic
// fit of c_t - |u_t|^2_{R_t} on z_t, projected to the PSD cone.
std::vector<Matrix> fit_costs(const LatentDataset& lds, const std::vector<Matrix>& R,
                              Eigen::Index ell, double rel_tol = 1e-10);

// Certainty-equivalent planning: the control RDE on the identified model
// with terminal cost Q_T.
Controller plan(const LatentModel& model);

// The learned history policy pi(h_t, t) = K_t M_t h_t.
Policy assemble_policy(const StateRepresentation& rep, const Controller& ctl);

}  // namespace lqg

#endif  // LQGLEARN_SYSID_HPP_
