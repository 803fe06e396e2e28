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

#include "lqg/evaluation.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lqg/errors.hpp"

namespace lqg {

AlignmentResult representation_error(const StateRepresentation& rep,
                                     const HistoryRepresentation& oracle_rep) {
  if (rep.M.size() != oracle_rep.M.size())
    throw ValidationError("representation_error: horizon mismatch");
  AlignmentResult out;
  const auto count = rep.M.size();
  out.S.resize(count);
  out.rep_err_op.resize(count);
  out.rep_err_fro.resize(count);
  for (std::size_t t = 0; t < count; ++t) {
    if (rep.M[t].rows() != oracle_rep.M[t].rows() ||
        rep.M[t].cols() != oracle_rep.M[t].cols())
      throw ValidationError("representation_error: shape mismatch at t=" +
                            std::to_string(t));
    out.S[t] = procrustes_align(oracle_rep.M[t], rep.M[t]);
    const Matrix diff = rep.M[t] - out.S[t] * oracle_rep.M[t];
    out.rep_err_op[t] = op_norm(diff);
    out.rep_err_fro[t] = diff.norm();
  }
  return out;
}

double controller_suboptimality(const NormalizedSystem& ns,
                                const AlignmentResult& align, const Controller& ctl,
                                Eigen::Index ell, double sigma_u, Segment segment) {
  const LqgSystem& sys = ns.system;
  if (ell < 1 || ell > sys.T)
    throw ValidationError("controller_suboptimality: ell out of range");
  const FilterSolution fs = filter_riccati(sys);

  const Eigen::Index t0 = segment == Segment::kEarly ? 0 : ell;
  const Eigen::Index t1 = segment == Segment::kEarly ? ell : sys.T;
  if (t0 >= t1 && segment == Segment::kEarly)
    throw ValidationError("controller_suboptimality: empty early segment");

  // Aligned true latent LQ system over [t0, t1]: the gauge of the learned
  // controller, with the filter's innovation terms as process noise.
  std::vector<Matrix> A, B, Q, R, W, K_hat;
  for (Eigen::Index t = t0; t < t1; ++t) {
    A.push_back(align.S[t + 1] * sys.A[t] * align.S[t].transpose());
    B.push_back(align.S[t + 1] * sys.B[t]);
    Q.push_back(align.S[t] * sys.Q[t] * align.S[t].transpose());
    R.push_back(sys.R[t]);
    const Matrix noise =
        fs.L[t + 1] * fs.Lambda[t + 1] * fs.L[t + 1].transpose();
    W.push_back(align.S[t + 1] * noise * align.S[t + 1].transpose());
    K_hat.push_back(ctl.K[t]);
  }

  Matrix terminal;
  if (segment == Segment::kLate) {
    terminal = align.S[sys.T] * sys.Q[sys.T] * align.S[sys.T].transpose();
  } else {
    // Early segment ends at ell with the optimal cost-to-go as terminal cost.
    const LqrSolution full = control_riccati(sys);
    terminal = align.S[ell] * full.P[ell] * align.S[ell].transpose();
  }

  const std::vector<Matrix> cov = latent_covariances(sys, fs, sigma_u);
  const Matrix Sigma0 = align.S[t0] * cov[t0] * align.S[t0].transpose();

  const LqrSolution opt = control_riccati(A, B, Q, R, terminal);
  const double J_hat =
      evaluate_feedback_exact(A, B, W, Sigma0, K_hat, Q, R, terminal).J;
  const double J_opt =
      evaluate_feedback_exact(A, B, W, Sigma0, opt.K, Q, R, terminal).J;
  return J_hat - J_opt;
}

GapEstimate end_to_end_gap(const LqgSystem& sys, const Policy& policy,
                           Eigen::Index n_mc, std::uint64_t seed) {
  if (n_mc < 100) throw ValidationError("end_to_end_gap: n_mc must be >= 100");
  const FilterSolution fs = filter_riccati(sys);
  const LqrSolution lqr = control_riccati(sys);
  const double J_opt = optimal_cost_exact(sys, fs, lqr);
  const McEstimate mc = evaluate_policy_mc(sys, policy, n_mc, seed);
  return GapEstimate{mc.mean - J_opt, mc.stderr};
}

double zero_control_gap(const LqgSystem& sys) {
  std::vector<Matrix> K(sys.T, Matrix::Zero(sys.d_u, sys.d_x));
  std::vector<Matrix> Q(sys.Q.begin(), sys.Q.begin() + sys.T);
  const double J_zero =
      evaluate_feedback_exact(sys.A, sys.B, sys.Sigma_w, sys.Sigma0, K, Q, sys.R,
                              sys.Q[sys.T])
          .J;
  const FilterSolution fs = filter_riccati(sys);
  const LqrSolution lqr = control_riccati(sys);
  return J_zero - optimal_cost_exact(sys, fs, lqr);
}

RateFit rate_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) throw ValidationError("rate_fit: need >= 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& [x, err] : points) {
    if (x <= 0.0 || err <= 0.0)
      throw ValidationError("rate_fit: nonpositive point");
    const double lx = std::log(x), ly = std::log(err);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    syy += ly * ly;
  }
  const double vxx = sxx - sx * sx / n;
  const double vxy = sxy - sx * sy / n;
  const double vyy = syy - sy * sy / n;
  if (vxx <= 0.0) throw ValidationError("rate_fit: degenerate abscissae");
  RateFit fit;
  fit.slope = vxy / vxx;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.r2 = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return fit;
}

}  // namespace lqg
