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

#ifndef LQGLEARN_QUADREG_HPP_
#define LQGLEARN_QUADREG_HPP_

#include <vector>

#include "lqg/linalg.hpp"
#include "lqg/system.hpp"

namespace lqg {

struct QuadFit {
  Matrix N_hat;        // symmetric d_h x d_h
  double b_hat = 0.0;  // intercept
  double residual_rms = 0.0;
  Eigen::Index feature_dim = 0;  // d_h (d_h + 1) / 2 + 1
};

// Hard cap on the svec feature dimension; fits beyond it abort with a
// ValidationError instead of exhausting memory.
inline constexpr Eigen::Index kMaxQuadFeatures = 20000;

// Fits min over symmetric N and intercept b of sum_i (|h_i|^2_N + b - y_i)^2
// via the svec linearization and minimum-norm least squares. Optional ridge
// penalty (off by default; the estimator of record is plain least squares).
QuadFit fit_quadratic(const std::vector<Vector>& h, const std::vector<double>& y,
                      double rel_tol = 1e-10, double ridge = 0.0);

// Cumulative regression targets: with k = 1 for t < ell and
// k = min(m, T - t + 1) for t >= ell,
//   ytilde_t^(i) = sum_{tau=t}^{t+k-1} c_tau - sum_{tau=t}^{min(t+k-1, T-1)}
//                  |u_tau|^2_{R_tau}
// (the terminal step carries no control cost). Returned as [t][i].
std::vector<std::vector<double>> cumulative_targets(const Dataset& ds,
                                                    const std::vector<Matrix>& R,
                                                    Eigen::Index ell, Eigen::Index m);

}  // namespace lqg

#endif  // LQGLEARN_QUADREG_HPP_
