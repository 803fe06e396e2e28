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

#ifndef LQGLEARN_ORACLE_HPP_
#define LQGLEARN_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "lqg/linalg.hpp"
#include "lqg/system.hpp"

namespace lqg {

// Forward Riccati solution. Convention: S_pred[t] is the covariance before
// the step-t measurement update (S_pred[0] = Sigma_0), S_upd[t] the one
// after; the gain L[t] and innovation covariance Lambda[t] use S_pred[t].
struct FilterSolution {
  std::vector<Matrix> S_pred;   // t = 0..T
  std::vector<Matrix> S_upd;    // t = 0..T
  std::vector<Matrix> L;        // t = 0..T, d_x x d_y
  std::vector<Matrix> Lambda;   // t = 0..T, innovation covariances
};

FilterSolution filter_riccati(const LqgSystem& sys);

struct FilterRun {
  std::vector<Vector> z;            // t = 0..T, latent estimates
  std::vector<Vector> innovations;  // t = 0..T
};

// Runs the Kalman recursion z_0 = L_0 y_0,
// z_{t+1} = A_t z_t + B_t u_t + L_{t+1}(y_{t+1} - C_{t+1}(A_t z_t + B_t u_t)).
FilterRun kalman_filter(const LqgSystem& sys, const FilterSolution& fs,
                        const std::vector<Vector>& y, const std::vector<Vector>& u);

struct LqrSolution {
  std::vector<Matrix> P;  // value matrices, window length + 1 entries
  std::vector<Matrix> K;  // feedback gains, window length entries
};

// Backward Riccati recursion over an arbitrary window; sequence index 0 is
// the window start. terminal_P seeds P at the window end.
LqrSolution control_riccati(const std::vector<Matrix>& A, const std::vector<Matrix>& B,
                            const std::vector<Matrix>& Q, const std::vector<Matrix>& R,
                            const Matrix& terminal_P);

// Full-horizon solution with terminal cost Q_T.
LqrSolution control_riccati(const LqgSystem& sys);

struct HistoryRepresentation {
  std::vector<Matrix> M;  // t = 0..T, d_x x ((t+1) d_y + t d_u)
};

// Unrolled filter: z_t = M_t [y_{0:t}; u_{0:(t-1)}] with the
// Abar_t = (I - L_{t+1} C_{t+1}) A_t closed-loop blocks.
HistoryRepresentation build_history_representation(const LqgSystem& sys,
                                                   const FilterSolution& fs);

struct ExactCost {
  double J = 0.0;
  std::vector<Matrix> Xi;  // state covariances, t = 0..window end
};

// Exact expected cost of linear state feedback u_t = K_t x_t:
// Xi_{t+1} = (A_t + B_t K_t) Xi_t (.)^T + Sigma_w_t,
// J = sum_t <Q_t + K_t^T R_t K_t, Xi_t> + <terminal, Xi_end>.
ExactCost evaluate_feedback_exact(const std::vector<Matrix>& A,
                                  const std::vector<Matrix>& B,
                                  const std::vector<Matrix>& Sigma_w,
                                  const Matrix& Sigma0,
                                  const std::vector<Matrix>& K,
                                  const std::vector<Matrix>& Q,
                                  const std::vector<Matrix>& R,
                                  const Matrix& terminal_Q);

struct McEstimate {
  double mean = 0.0;
  double stderr = 0.0;
};

// Monte-Carlo total cost of a history policy; deterministic given seed.
McEstimate evaluate_policy_mc(const LqgSystem& sys, const Policy& policy,
                              Eigen::Index n_mc, std::uint64_t seed);

// The separation-principle optimal policy: u_t = K*_t z*_t with z*_t from
// the recursive Kalman filter on the observed prefix.
Policy oracle_policy(const LqgSystem& sys, const FilterSolution& fs,
                     const LqrSolution& lqr);

// Exact optimal expected cost via the latent-space LQR value identity:
// J* = sum_t tr(Q_t S_upd_t) + <P_0, L_0 Lambda_0 L_0^T>
//      + sum_{t<T} <P_{t+1}, L_{t+1} Lambda_{t+1} L_{t+1}^T>.
double optimal_cost_exact(const LqgSystem& sys, const FilterSolution& fs,
                          const LqrSolution& lqr);

// Exact Cov(z*_t) under exploration u_t ~ N(0, sigma_u^2 I):
// Cov(z_0) = L_0 Lambda_0 L_0^T,
// Cov(z_{t+1}) = A_t Cov A_t^T + sigma_u^2 B_t B_t^T + L_{t+1} Lambda_{t+1} L_{t+1}^T.
std::vector<Matrix> latent_covariances(const LqgSystem& sys, const FilterSolution& fs,
                                       double sigma_u);

}  // namespace lqg

#endif  // LQGLEARN_ORACLE_HPP_
