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

#include "lqg/corel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lqg/errors.hpp"
#include "lqg/parallel.hpp"
#include "lqg/quadreg.hpp"

namespace lqg {

double CorelConfig::resolve_theta(Eigen::Index d_y, Eigen::Index d_u,
                                  Eigen::Index n) const {
  if (theta >= 0.0) return theta;
  return c_theta *
         std::sqrt(static_cast<double>(ell) * static_cast<double>(d_y + d_u)) *
         std::pow(static_cast<double>(d_x), 0.75) *
         std::pow(static_cast<double>(n), -0.25);
}

Vector build_history(const LearnerView& view, Eigen::Index t) {
  // Bounds come from y/u, not c: causal prefixes seen by policies have
  // y_{0:t} and u_{0:t-1} populated but costs only up to t-1.
  if (t < 0 || t >= static_cast<Eigen::Index>(view.y.size()) ||
      t > static_cast<Eigen::Index>(view.u.size()))
    throw ValidationError("build_history: t out of range");
  const Eigen::Index d_y = view.y[0].size();
  const Eigen::Index d_u = t > 0 ? view.u[0].size() : 0;
  Vector h((t + 1) * d_y + t * d_u);
  for (Eigen::Index s = 0; s <= t; ++s) h.segment(s * d_y, d_y) = view.y[s];
  for (Eigen::Index s = 0; s < t; ++s)
    h.segment((t + 1) * d_y + s * d_u, d_u) = view.u[s];
  return h;
}

std::pair<StateRepresentation, LatentDataset> corel(const Dataset& ds,
                                                    const CorelConfig& cfg,
                                                    const std::vector<Matrix>& R) {
  if (ds.n < 1) throw ValidationError("corel: empty dataset");
  if (cfg.d_x < 1) throw ValidationError("corel: d_x must be >= 1");
  const auto T = static_cast<Eigen::Index>(ds.trajectories[0].c.size()) - 1;
  const Eigen::Index d_y = ds.trajectories[0].y[0].size();
  const Eigen::Index d_u = ds.trajectories[0].u[0].size();
  const double theta = cfg.resolve_theta(d_y, d_u, ds.n);

  const auto targets = cumulative_targets(ds, R, cfg.ell, cfg.m);

  StateRepresentation rep;
  rep.M.resize(T + 1);
  rep.N_hat.resize(T + 1);
  rep.diag.resize(T + 1);
  rep.theta = theta;
  rep.n = ds.n;

  LatentDataset lds;
  lds.z.resize(T + 1);
  lds.u.resize(T);
  lds.c.resize(T + 1);

  parallel_for(T + 1, [&](std::int64_t t) {
    std::vector<Vector> h(ds.n);
    for (Eigen::Index i = 0; i < ds.n; ++i)
      h[i] = build_history(learner_view(ds.trajectories[i]), t);

    const QuadFit fit = fit_quadratic(h, targets[t], cfg.rel_tol);
    Matrix M = low_rank_factor(fit.N_hat, cfg.d_x).factor;
    if (t < cfg.ell) M = trunc_sv(M, theta);

    Eigen::Index kept = 0;
    {
      Eigen::JacobiSVD<Matrix> svd(M);
      for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 0.0) ++kept;
    }
    rep.N_hat[t] = fit.N_hat;
    rep.diag[t] = {fit.N_hat.norm(), fit.b_hat, kept};
    rep.M[t] = M;

    lds.z[t].resize(ds.n);
    lds.c[t].resize(ds.n);
    if (t < T) lds.u[t].resize(ds.n);
    for (Eigen::Index i = 0; i < ds.n; ++i) {
      const LearnerView view = learner_view(ds.trajectories[i]);
      lds.z[t][i] = M * h[i];
      lds.c[t][i] = view.c[t];
      if (t < T) lds.u[t][i] = view.u[t];
    }
  });
  return {std::move(rep), std::move(lds)};
}

Eigen::Index discover_rank(const std::vector<Matrix>& N_hats) {
  if (N_hats.empty()) throw ValidationError("discover_rank: no inputs");
  std::map<Eigen::Index, int> votes;
  for (const Matrix& N : N_hats) {
    const EigSym es = eig_sym_desc(N);
    std::vector<double> pos;
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
      if (es.values[i] > 0.0) pos.push_back(es.values[i]);
    if (pos.empty())
      throw NumericalError("discover_rank: no positive eigenvalues");
    // Largest relative gap in the sorted positive spectrum.
    Eigen::Index best = static_cast<Eigen::Index>(pos.size());
    double best_ratio = 0.0;
    for (std::size_t i = 0; i + 1 < pos.size(); ++i) {
      const double ratio = pos[i] / pos[i + 1];
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = static_cast<Eigen::Index>(i + 1);
      }
    }
    // Flat spectra (no interior gap dominating) keep the full count.
    if (best_ratio < 2.0) best = static_cast<Eigen::Index>(pos.size());
    votes[best] += 1;
  }
  Eigen::Index winner = 0;
  int most = -1;
  for (const auto& [rank, count] : votes)
    if (count > most) {
      most = count;
      winner = rank;
    }
  return winner;
}

}  // namespace lqg
