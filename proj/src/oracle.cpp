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

#include "lqg/oracle.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lqg/errors.hpp"
#include "lqg/parallel.hpp"
#include "lqg/rng.hpp"

namespace lqg {

namespace {

Matrix symmetrize(const Matrix& S) { return 0.5 * (S + S.transpose()); }

// Inverts an innovation covariance, rejecting condition numbers above 1e12.
Matrix invert_innovation(const Matrix& lambda, Eigen::Index t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(lambda));
  const double lam_min = es.eigenvalues().minCoeff();
  const double lam_max = es.eigenvalues().maxCoeff();
  if (lam_max <= 0.0 || lam_min <= 1e-12 * lam_max)
    throw NumericalError("filter_riccati: singular innovation covariance at t=" +
                         std::to_string(t));
  return es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace

FilterSolution filter_riccati(const LqgSystem& sys) {
  FilterSolution fs;
  fs.S_pred.resize(sys.T + 1);
  fs.S_upd.resize(sys.T + 1);
  fs.L.resize(sys.T + 1);
  fs.Lambda.resize(sys.T + 1);
  fs.S_pred[0] = symmetrize(sys.Sigma0);
  for (Eigen::Index t = 0; t <= sys.T; ++t) {
    fs.Lambda[t] =
        symmetrize(sys.C[t] * fs.S_pred[t] * sys.C[t].transpose() + sys.Sigma_v[t]);
    const Matrix lambda_inv = invert_innovation(fs.Lambda[t], t);
    fs.L[t] = fs.S_pred[t] * sys.C[t].transpose() * lambda_inv;
    fs.S_upd[t] = symmetrize(
        (Matrix::Identity(sys.d_x, sys.d_x) - fs.L[t] * sys.C[t]) * fs.S_pred[t]);
    if (t < sys.T)
      fs.S_pred[t + 1] =
          symmetrize(sys.A[t] * fs.S_upd[t] * sys.A[t].transpose() + sys.Sigma_w[t]);
  }
  return fs;
}

FilterRun kalman_filter(const LqgSystem& sys, const FilterSolution& fs,
                        const std::vector<Vector>& y, const std::vector<Vector>& u) {
  if (static_cast<Eigen::Index>(y.size()) != sys.T + 1 ||
      static_cast<Eigen::Index>(u.size()) != sys.T)
    throw ValidationError("kalman_filter: sequence length mismatch");
  FilterRun run;
  run.z.resize(sys.T + 1);
  run.innovations.resize(sys.T + 1);
  run.innovations[0] = y[0];  // prior observation mean is zero
  run.z[0] = fs.L[0] * y[0];
  for (Eigen::Index t = 0; t < sys.T; ++t) {
    const Vector pred = sys.A[t] * run.z[t] + sys.B[t] * u[t];
    run.innovations[t + 1] = y[t + 1] - sys.C[t + 1] * pred;
    run.z[t + 1] = pred + fs.L[t + 1] * run.innovations[t + 1];
  }
  return run;
}

LqrSolution control_riccati(const std::vector<Matrix>& A, const std::vector<Matrix>& B,
                            const std::vector<Matrix>& Q, const std::vector<Matrix>& R,
                            const Matrix& terminal_P) {
  const auto H = static_cast<Eigen::Index>(A.size());
  if (static_cast<Eigen::Index>(B.size()) != H ||
      static_cast<Eigen::Index>(Q.size()) != H ||
      static_cast<Eigen::Index>(R.size()) != H)
    throw ValidationError("control_riccati: window length mismatch");
  LqrSolution sol;
  sol.P.resize(H + 1);
  sol.K.resize(H);
  sol.P[H] = symmetrize(terminal_P);
  for (Eigen::Index t = H - 1; t >= 0; --t) {
    const Matrix G = B[t].transpose() * sol.P[t + 1] * B[t] + R[t];
    Eigen::LDLT<Matrix> ldlt(symmetrize(G));
    if (ldlt.info() != Eigen::Success)
      throw NumericalError("control_riccati: singular gain system at t=" +
                           std::to_string(t));
    sol.K[t] = -ldlt.solve(B[t].transpose() * sol.P[t + 1] * A[t]);
    sol.P[t] = symmetrize(Q[t] + A[t].transpose() * sol.P[t + 1] *
                                     (A[t] + B[t] * sol.K[t]));
  }
  return sol;
}

LqrSolution control_riccati(const LqgSystem& sys) {
  std::vector<Matrix> Q(sys.Q.begin(), sys.Q.begin() + sys.T);
  return control_riccati(sys.A, sys.B, Q, sys.R, sys.Q[sys.T]);
}

HistoryRepresentation build_history_representation(const LqgSystem& sys,
                                                   const FilterSolution& fs) {
  HistoryRepresentation rep;
  rep.M.resize(sys.T + 1);
  // Closed-loop blocks: Abar_t = (I - L_{t+1} C_{t+1}) A_t, likewise Bbar_t.
  std::vector<Matrix> Abar(sys.T), Bbar(sys.T);
  const Matrix I = Matrix::Identity(sys.d_x, sys.d_x);
  for (Eigen::Index t = 0; t < sys.T; ++t) {
    const Matrix gate = I - fs.L[t + 1] * sys.C[t + 1];
    Abar[t] = gate * sys.A[t];
    Bbar[t] = gate * sys.B[t];
  }
  for (Eigen::Index t = 0; t <= sys.T; ++t) {
    Matrix M(sys.d_x, (t + 1) * sys.d_y + t * sys.d_u);
    // y_s coefficient: Abar_{t-1} ... Abar_s L_s; u_s: Abar_{t-1} ... Abar_{s+1} Bbar_s.
    Matrix suffix = Matrix::Identity(sys.d_x, sys.d_x);
    for (Eigen::Index s = t; s >= 0; --s) {
      M.middleCols(s * sys.d_y, sys.d_y) = suffix * fs.L[s];
      if (s > 0) {
        M.middleCols((t + 1) * sys.d_y + (s - 1) * sys.d_u, sys.d_u) =
            suffix * Bbar[s - 1];
        suffix = suffix * Abar[s - 1];
      }
    }
    rep.M[t] = M;
  }
  return rep;
}

ExactCost evaluate_feedback_exact(const std::vector<Matrix>& A,
                                  const std::vector<Matrix>& B,
                                  const std::vector<Matrix>& Sigma_w,
                                  const Matrix& Sigma0,
                                  const std::vector<Matrix>& K,
                                  const std::vector<Matrix>& Q,
                                  const std::vector<Matrix>& R,
                                  const Matrix& terminal_Q) {
  const auto H = static_cast<Eigen::Index>(A.size());
  if (static_cast<Eigen::Index>(B.size()) != H ||
      static_cast<Eigen::Index>(Sigma_w.size()) != H ||
      static_cast<Eigen::Index>(K.size()) != H ||
      static_cast<Eigen::Index>(Q.size()) != H ||
      static_cast<Eigen::Index>(R.size()) != H)
    throw ValidationError("evaluate_feedback_exact: window length mismatch");
  ExactCost out;
  out.Xi.resize(H + 1);
  out.Xi[0] = 0.5 * (Sigma0 + Sigma0.transpose());
  for (Eigen::Index t = 0; t < H; ++t) {
    out.J += (Q[t] + K[t].transpose() * R[t] * K[t])
                 .cwiseProduct(out.Xi[t])
                 .sum();
    const Matrix closed = A[t] + B[t] * K[t];
    out.Xi[t + 1] =
        0.5 * ((closed * out.Xi[t] * closed.transpose() + Sigma_w[t]) +
               (closed * out.Xi[t] * closed.transpose() + Sigma_w[t]).transpose());
  }
  out.J += terminal_Q.cwiseProduct(out.Xi[H]).sum();
  return out;
}

McEstimate evaluate_policy_mc(const LqgSystem& sys, const Policy& policy,
                              Eigen::Index n_mc, std::uint64_t seed) {
  if (n_mc < 2) throw ValidationError("evaluate_policy_mc: n_mc must be >= 2");
  std::vector<double> totals(n_mc);
  parallel_for(n_mc, [&](std::int64_t i) {
    const Trajectory traj =
        simulate(sys, policy, derive_seed(seed, static_cast<std::uint64_t>(i)));
    double total = 0.0;
    for (double c : traj.c) total += c;
    totals[i] = total;
  });
  // Fixed-order accumulation keeps the estimate independent of thread count.
  double mean = 0.0;
  for (double v : totals) mean += v;
  mean /= static_cast<double>(n_mc);
  double var = 0.0;
  for (double v : totals) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n_mc - 1);
  return {mean, std::sqrt(var / static_cast<double>(n_mc))};
}

Policy oracle_policy(const LqgSystem& sys, const FilterSolution& fs,
                     const LqrSolution& lqr) {
  return [&sys, &fs, &lqr](const Trajectory& prefix, Eigen::Index t) {
    // Re-run the filter over the causal prefix; horizons are short enough
    // that the quadratic cost of recomputation is negligible.
    Vector z = fs.L[0] * prefix.y[0];
    for (Eigen::Index s = 0; s < t; ++s) {
      const Vector pred = sys.A[s] * z + sys.B[s] * prefix.u[s];
      z = pred + fs.L[s + 1] * (prefix.y[s + 1] - sys.C[s + 1] * pred);
    }
    return Vector(lqr.K[t] * z);
  };
}

double optimal_cost_exact(const LqgSystem& sys, const FilterSolution& fs,
                          const LqrSolution& lqr) {
  // Estimation part: E|x_t - z_t|^2_{Q_t} summed over the horizon.
  double J = 0.0;
  for (Eigen::Index t = 0; t <= sys.T; ++t)
    J += sys.Q[t].cwiseProduct(fs.S_upd[t]).sum();
  // Latent LQR value: initial covariance L_0 Lambda_0 L_0^T and per-step
  // process noise L_{t+1} Lambda_{t+1} L_{t+1}^T.
  const Matrix cov0 = fs.L[0] * fs.Lambda[0] * fs.L[0].transpose();
  J += lqr.P[0].cwiseProduct(cov0).sum();
  for (Eigen::Index t = 0; t < sys.T; ++t) {
    const Matrix w = fs.L[t + 1] * fs.Lambda[t + 1] * fs.L[t + 1].transpose();
    J += lqr.P[t + 1].cwiseProduct(w).sum();
  }
  return J;
}

std::vector<Matrix> latent_covariances(const LqgSystem& sys, const FilterSolution& fs,
                                       double sigma_u) {
  std::vector<Matrix> cov(sys.T + 1);
  cov[0] = symmetrize(fs.L[0] * fs.Lambda[0] * fs.L[0].transpose());
  for (Eigen::Index t = 0; t < sys.T; ++t) {
    cov[t + 1] = symmetrize(
        sys.A[t] * cov[t] * sys.A[t].transpose() +
        sigma_u * sigma_u * sys.B[t] * sys.B[t].transpose() +
        fs.L[t + 1] * fs.Lambda[t + 1] * fs.L[t + 1].transpose());
  }
  return cov;
}

}  // namespace lqg
