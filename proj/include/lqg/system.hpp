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

#ifndef LQGLEARN_SYSTEM_HPP_
#define LQGLEARN_SYSTEM_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lqg/linalg.hpp"

namespace lqg {

// Ground-truth LTV LQG model:
//   x_{t+1} = A_t x_t + B_t u_t + w_t,   w_t ~ N(0, Sigma_w[t])
//   y_t     = C_t x_t + v_t,             v_t ~ N(0, Sigma_v[t])
//   c_t     = |x_t|^2_{Q_t} + |u_t|^2_{R_t},  c_T = |x_T|^2_{Q_T}
// A, B, R, Sigma_w are indexed t = 0..T-1; C, Q, Sigma_v are t = 0..T.
struct LqgSystem {
  Eigen::Index T = 0;
  Eigen::Index d_x = 0, d_y = 0, d_u = 0;
  std::vector<Matrix> A, B, C, Q, R, Sigma_w, Sigma_v;
  Matrix Sigma0;

  // Throws ValidationError on any shape or definiteness violation.
  void validate() const;
};

struct Trajectory {
  std::vector<Vector> y;  // t = 0..T
  std::vector<Vector> u;  // t = 0..T-1
  std::vector<double> c;  // t = 0..T
  // States are kept for diagnostics only; learning modules must consume the
  // learner view (y, u, c) and never touch x.
  std::vector<Vector> x;  // t = 0..T
};

// Partial-observability guard: the only surface learners may read.
struct LearnerView {
  const std::vector<Vector>& y;
  const std::vector<Vector>& u;
  const std::vector<double>& c;
};

inline LearnerView learner_view(const Trajectory& traj) {
  return LearnerView{traj.y, traj.u, traj.c};
}

struct Dataset {
  std::string system_tag;
  Eigen::Index n = 0;
  double sigma_u = 0.0;
  std::uint64_t master_seed = 0;
  std::vector<Trajectory> trajectories;
};

// Policies see the causal prefix of the trajectory: at step t the fields
// y[0..t] and u[0..t-1] are populated.
using Policy = std::function<Vector(const Trajectory& prefix, Eigen::Index t)>;

// State-transition product Phi_{t,t0} = A_{t-1} ... A_{t0}; Phi_{t,t} = I.
Matrix transition_product(const LqgSystem& sys, Eigen::Index t, Eigen::Index t0);

struct StabilityReport {
  bool pass = false;
  Eigen::Index worst_t0 = 0, worst_t = 0;
  double worst_norm = 0.0;
  double worst_ratio = 0.0;  // |Phi|_2 / (alpha rho^{t-t0}) at the worst pair
};

// Checks |Phi_{t,t0}|_2 <= alpha rho^{t-t0} exhaustively over 0 <= t0 < t <= T.
StabilityReport check_stability(const LqgSystem& sys, double alpha, double rho);

struct ControllabilityReport {
  double min_sigma = 0.0;  // min over t of sigma_min(Phi^c_{t,ell})
  std::vector<bool> full_rank;  // indexed by t - (ell-1)
  bool all_full_rank = false;
};

// Assumption 2: sigma_min of the ell-step controllability matrices
// [B_t, A_t B_{t-1}, ..., A_t...A_{t-ell+2} B_{t-ell+1}] for ell-1 <= t <= T-1.
ControllabilityReport check_controllability(const LqgSystem& sys, Eigen::Index ell);

struct GramianReport {
  std::vector<Matrix> gramians;  // Q-bar_t, t = 0..T
  std::vector<Eigen::Index> k;   // window length used at each t
  double min_eigenvalue = 0.0;   // empirical mu^2
};

// Cost-observability Gramians with the k-rule: k = 1 for t < ell,
// k = min(m, T - t + 1) for t >= ell.
GramianReport cost_observability_gramians(const LqgSystem& sys, Eigen::Index ell,
                                          Eigen::Index m);

// Rolls out one trajectory; every Gaussian draw is a pure function of
// (seed, stream kind, t), so results are bit-reproducible.
Trajectory simulate(const LqgSystem& sys, const Policy& policy, std::uint64_t seed);

// The exploration policy of Algorithm 1: u_t ~ N(0, sigma_u^2 I), drawn from
// the trajectory's control stream.
Policy exploration_policy(const LqgSystem& sys, double sigma_u, std::uint64_t seed);

// n trajectories under exploration; trajectory i uses derive_seed(master, i).
// Parallelized across trajectories; output independent of thread count.
Dataset collect_dataset(const LqgSystem& sys, double sigma_u, Eigen::Index n,
                        std::uint64_t master_seed,
                        const std::string& system_tag = "");

enum class FixtureMode { kGeneric, kRankDeficientEarly };

struct RandomSystemSpec {
  Eigen::Index d_x = 2, d_y = 2, d_u = 2;
  Eigen::Index T = 6;
  double rho_target = 0.7;   // |A_t|_2 rescaled to this value
  double w_scale = 0.3;      // process-noise magnitude
  double v_scale = 0.3;      // observation-noise magnitude
  double init_scale = 1.0;   // Sigma_0 magnitude
  double cost_scale = 1.0;
  double q_floor = 0.5;
  double r_floor = 0.5;
  FixtureMode mode = FixtureMode::kGeneric;
};

// Test-fixture generator satisfying Assumptions 1-4 by construction:
// |A_t|_2 = rho_target < 1, full-rank B_t/C_t (up to 10 redraws),
// Q_t and R_t with eigenvalue floors, strictly positive noise covariances.
LqgSystem random_system(const RandomSystemSpec& spec, std::uint64_t seed);

}  // namespace lqg

#endif  // LQGLEARN_SYSTEM_HPP_
