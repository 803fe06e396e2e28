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

#ifndef LQGLEARN_EVALUATION_HPP_
#define LQGLEARN_EVALUATION_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lqg/corel.hpp"
#include "lqg/normalization.hpp"
#include "lqg/oracle.hpp"
#include "lqg/sysid.hpp"
#include "lqg/system.hpp"

namespace lqg {

struct AlignmentResult {
  std::vector<Matrix> S;             // orthonormal d_x x d_x alignments, t = 0..T
  std::vector<double> rep_err_op;    // |M_hat_t - S_t M*'_t|_2
  std::vector<double> rep_err_fro;   // Frobenius companion
};

// S_t minimizes |S M*'_t - M_hat_t|_F over orthonormal S; errors are
// reported in operator norm (Theorem-3 convention) plus Frobenius.
AlignmentResult representation_error(const StateRepresentation& rep,
                                     const HistoryRepresentation& oracle_rep);

enum class Segment { kEarly, kLate };

// Suboptimality of the learned gains in the Procrustes-aligned true latent
// LQ system over [0, ell) (terminal cost P*'_ell) or [ell, T] (terminal
// Q'_T). The gap is measured against the segment-optimal controller.
double controller_suboptimality(const NormalizedSystem& ns,
                                const AlignmentResult& align, const Controller& ctl,
                                Eigen::Index ell, double sigma_u, Segment segment);

struct GapEstimate {
  double gap = 0.0;
  double stderr = 0.0;
};

// Monte-Carlo J(pi) minus the exact optimal cost. Exploratory metric: the
// paper conjectures but does not prove a rate for it.
GapEstimate end_to_end_gap(const LqgSystem& sys, const Policy& policy,
                           Eigen::Index n_mc, std::uint64_t seed);

// Exact J(zero policy) minus exact optimal cost.
double zero_control_gap(const LqgSystem& sys);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares on (log n, log err); all errors must be positive.
RateFit rate_fit(const std::vector<std::pair<double, double>>& points);

}  // namespace lqg

#endif  // LQGLEARN_EVALUATION_HPP_
