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

#include "lqg/sysid.hpp"

#include <utility>
#include <vector>

#include "lqg/errors.hpp"
#include "lqg/parallel.hpp"
#include "lqg/quadreg.hpp"

namespace lqg {

std::pair<std::vector<Matrix>, std::vector<Matrix>> fit_dynamics(
    const LatentDataset& lds, double rel_tol) {
  const auto T = static_cast<Eigen::Index>(lds.u.size());
  if (T < 1 || lds.z.size() != static_cast<std::size_t>(T + 1))
    throw ValidationError("fit_dynamics: malformed latent dataset");
  const auto n = static_cast<Eigen::Index>(lds.z[0].size());
  const Eigen::Index d_x = lds.z[0][0].size();
  const Eigen::Index d_u = lds.u[0][0].size();

  std::vector<Matrix> A(T), B(T);
  parallel_for(T, [&](std::int64_t t) {
    Matrix X(n, d_x + d_u);
    Matrix Y(n, d_x);
    for (Eigen::Index i = 0; i < n; ++i) {
      X.row(i).head(d_x) = lds.z[t][i].transpose();
      X.row(i).tail(d_u) = lds.u[t][i].transpose();
      Y.row(i) = lds.z[t + 1][i].transpose();
    }
    const Matrix W = min_norm_lstsq(X, Y, rel_tol);  // (d_x + d_u) x d_x
    A[t] = W.topRows(d_x).transpose();
    B[t] = W.bottomRows(d_u).transpose();
  });
  return {std::move(A), std::move(B)};
}

std::vector<Matrix> fit_costs(const LatentDataset& lds, const std::vector<Matrix>& R,
                              Eigen::Index ell, double rel_tol) {
  const auto T = static_cast<Eigen::Index>(lds.u.size());
  if (static_cast<Eigen::Index>(R.size()) != T)
    throw ValidationError("fit_costs: R sequence length mismatch");
  if (ell < 1 || ell > T) throw ValidationError("fit_costs: ell out of range");
  const auto n = static_cast<Eigen::Index>(lds.z[0].size());
  const Eigen::Index d_x = lds.z[0][0].size();

  std::vector<Matrix> Q(T + 1);
  parallel_for(T + 1, [&](std::int64_t t) {
    if (t < ell || t == T) {
      Q[t] = Matrix::Identity(d_x, d_x);
      return;
    }
    std::vector<double> target(n);
    for (Eigen::Index i = 0; i < n; ++i)
      target[i] = lds.c[t][i] - lds.u[t][i].dot(R[t] * lds.u[t][i]);
    const QuadFit fit = fit_quadratic(lds.z[t], target, rel_tol);
    Q[t] = psd_project(fit.N_hat);
  });
  return Q;
}

Controller plan(const LatentModel& model) {
  const auto T = static_cast<Eigen::Index>(model.A.size());
  if (model.Q.size() != static_cast<std::size_t>(T + 1) ||
      model.B.size() != static_cast<std::size_t>(T) ||
      model.R.size() != static_cast<std::size_t>(T))
    throw ValidationError("plan: malformed latent model");
  std::vector<Matrix> Q(model.Q.begin(), model.Q.begin() + T);
  const LqrSolution sol =
      control_riccati(model.A, model.B, Q, model.R, model.Q[T]);
  return Controller{sol.K, sol.P};
}

Policy assemble_policy(const StateRepresentation& rep, const Controller& ctl) {
  if (rep.M.empty() || ctl.K.size() + 1 != rep.M.size())
    throw ValidationError("assemble_policy: need one gain per step, one "
                          "representation per time index");
  for (std::size_t t = 0; t < ctl.K.size(); ++t)
    if (ctl.K[t].cols() != rep.M[t].rows())
      throw ValidationError("assemble_policy: gain/representation shape mismatch");
  return [rep, ctl](const Trajectory& prefix, Eigen::Index t) {
    const Vector h = build_history(learner_view(prefix), t);
    return Vector(ctl.K[t] * (rep.M[t] * h));
  };
}

}  // namespace lqg
