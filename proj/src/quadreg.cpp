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

#include "lqg/quadreg.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lqg/errors.hpp"

namespace lqg {

QuadFit fit_quadratic(const std::vector<Vector>& h, const std::vector<double>& y,
                      double rel_tol, double ridge) {
  const auto n = static_cast<Eigen::Index>(h.size());
  if (n < 1 || h.size() != y.size())
    throw ValidationError("fit_quadratic: need matching nonempty samples");
  const Eigen::Index d = h[0].size();
  const Eigen::Index p = d * (d + 1) / 2 + 1;
  if (p > kMaxQuadFeatures)
    throw ValidationError("fit_quadratic: feature dimension " + std::to_string(p) +
                          " exceeds cap " + std::to_string(kMaxQuadFeatures));

  Matrix X(n, p);
  Matrix Y(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (h[i].size() != d)
      throw ValidationError("fit_quadratic: inconsistent sample dimension");
    X.row(i).head(p - 1) = svec(h[i] * h[i].transpose()).transpose();
    X(i, p - 1) = 1.0;
    Y(i, 0) = y[i];
  }

  Matrix W;
  if (ridge > 0.0) {
    // Exploratory-only ridge path; intercept is penalized like every other
    // coefficient for simplicity.
    const Matrix G =
        X.transpose() * X + ridge * Matrix::Identity(p, p);
    W = G.ldlt().solve(X.transpose() * Y);
  } else {
    W = min_norm_lstsq(X, Y, rel_tol);
  }

  QuadFit fit;
  fit.feature_dim = p;
  fit.N_hat = smat(W.col(0).head(p - 1));
  fit.b_hat = W(p - 1, 0);
  fit.residual_rms =
      std::sqrt((X * W - Y).squaredNorm() / static_cast<double>(n));
  return fit;
}

std::vector<std::vector<double>> cumulative_targets(const Dataset& ds,
                                                    const std::vector<Matrix>& R,
                                                    Eigen::Index ell, Eigen::Index m) {
  if (ds.n < 1 || ds.trajectories.empty())
    throw ValidationError("cumulative_targets: empty dataset");
  const auto T = static_cast<Eigen::Index>(ds.trajectories[0].c.size()) - 1;
  if (!(ell >= 1 && ell <= T) || m < 1)
    throw ValidationError("cumulative_targets: invalid window parameters");
  if (static_cast<Eigen::Index>(R.size()) != T)
    throw ValidationError("cumulative_targets: R sequence length mismatch");

  std::vector<std::vector<double>> targets(T + 1);
  for (Eigen::Index t = 0; t <= T; ++t) {
    const Eigen::Index k = t < ell ? 1 : std::min<Eigen::Index>(m, T - t + 1);
    targets[t].resize(ds.n);
    for (Eigen::Index i = 0; i < ds.n; ++i) {
      const LearnerView view = learner_view(ds.trajectories[i]);
      double val = 0.0;
      for (Eigen::Index tau = t; tau <= t + k - 1; ++tau) {
        val += view.c[tau];
        if (tau < T) val -= view.u[tau].dot(R[tau] * view.u[tau]);
      }
      targets[t][i] = val;
    }
  }
  return targets;
}

}  // namespace lqg
