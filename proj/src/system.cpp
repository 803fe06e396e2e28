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

#include "lqg/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lqg/errors.hpp"
#include "lqg/parallel.hpp"
#include "lqg/rng.hpp"

namespace lqg {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

void check_seq(const std::vector<Matrix>& seq, Eigen::Index count,
               Eigen::Index rows, Eigen::Index cols, const char* name) {
  require(static_cast<Eigen::Index>(seq.size()) == count,
          std::string(name) + ": expected " + std::to_string(count) + " matrices");
  for (const Matrix& m : seq)
    require(m.rows() == rows && m.cols() == cols,
            std::string(name) + ": shape mismatch");
}

double min_eig(const Matrix& S) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (S + S.transpose()))
      .eigenvalues()
      .minCoeff();
}

constexpr double kPsdSlack = -1e-9;

}  // namespace

void LqgSystem::validate() const {
  require(T >= 1, "LqgSystem: horizon must be >= 1");
  require(d_x >= 1 && d_y >= 1 && d_u >= 1, "LqgSystem: dimensions must be >= 1");
  check_seq(A, T, d_x, d_x, "A");
  check_seq(B, T, d_x, d_u, "B");
  check_seq(C, T + 1, d_y, d_x, "C");
  check_seq(Q, T + 1, d_x, d_x, "Q");
  check_seq(R, T, d_u, d_u, "R");
  check_seq(Sigma_w, T, d_x, d_x, "Sigma_w");
  check_seq(Sigma_v, T + 1, d_y, d_y, "Sigma_v");
  require(Sigma0.rows() == d_x && Sigma0.cols() == d_x, "Sigma0: shape mismatch");
  for (Eigen::Index t = 0; t <= T; ++t)
    require(min_eig(Q[t]) >= kPsdSlack, "Q[" + std::to_string(t) + "]: not PSD");
  for (Eigen::Index t = 0; t < T; ++t)
    require(min_eig(R[t]) > 0.0,
            "R[" + std::to_string(t) + "]: not positive definite");
  for (Eigen::Index t = 0; t < T; ++t)
    require(min_eig(Sigma_w[t]) >= kPsdSlack,
            "Sigma_w[" + std::to_string(t) + "]: not PSD");
  for (Eigen::Index t = 0; t <= T; ++t)
    require(min_eig(Sigma_v[t]) >= kPsdSlack,
            "Sigma_v[" + std::to_string(t) + "]: not PSD");
  require(min_eig(Sigma0) >= kPsdSlack, "Sigma0: not PSD");
}

Matrix transition_product(const LqgSystem& sys, Eigen::Index t, Eigen::Index t0) {
  require(0 <= t0 && t0 <= t && t <= sys.T, "transition_product: bad index pair");
  Matrix phi = Matrix::Identity(sys.d_x, sys.d_x);
  for (Eigen::Index s = t0; s < t; ++s) phi = sys.A[s] * phi;
  return phi;
}

StabilityReport check_stability(const LqgSystem& sys, double alpha, double rho) {
  require(alpha > 0.0, "check_stability: alpha must be positive");
  require(rho > 0.0 && rho < 1.0, "check_stability: rho must lie in (0, 1)");
  StabilityReport rep;
  rep.pass = true;
  for (Eigen::Index t0 = 0; t0 < sys.T; ++t0) {
    Matrix phi = Matrix::Identity(sys.d_x, sys.d_x);
    for (Eigen::Index t = t0 + 1; t <= sys.T; ++t) {
      phi = sys.A[t - 1] * phi;
      const double norm = op_norm(phi);
      const double ratio =
          norm / (alpha * std::pow(rho, static_cast<double>(t - t0)));
      if (ratio > rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_t0 = t0;
        rep.worst_t = t;
        rep.worst_norm = norm;
      }
    }
  }
  rep.pass = rep.worst_ratio <= 1.0 + 1e-9;
  return rep;
}

ControllabilityReport check_controllability(const LqgSystem& sys, Eigen::Index ell) {
  require(ell >= 1 && ell <= sys.T, "check_controllability: ell out of range");
  ControllabilityReport rep;
  rep.min_sigma = std::numeric_limits<double>::infinity();
  rep.all_full_rank = true;
  for (Eigen::Index t = ell - 1; t < sys.T; ++t) {
    Matrix phic(sys.d_x, ell * sys.d_u);
    // Block j is A_t ... A_{t-j+1} B_{t-j}.
    Matrix prod = Matrix::Identity(sys.d_x, sys.d_x);
    for (Eigen::Index j = 0; j < ell; ++j) {
      phic.middleCols(j * sys.d_u, sys.d_u) = prod * sys.B[t - j];
      if (j + 1 < ell) prod = prod * sys.A[t - j];
    }
    Eigen::JacobiSVD<Matrix> svd(phic);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    const bool full = phic.cols() >= sys.d_x && smin > 1e-10 * std::max(1.0, smax);
    rep.min_sigma = std::min(rep.min_sigma, smin);
    rep.full_rank.push_back(full);
    rep.all_full_rank = rep.all_full_rank && full;
  }
  return rep;
}

GramianReport cost_observability_gramians(const LqgSystem& sys, Eigen::Index ell,
                                          Eigen::Index m) {
  require(ell >= 1 && ell <= sys.T, "gramians: ell out of range");
  require(m >= 1, "gramians: m must be >= 1");
  GramianReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t <= sys.T; ++t) {
    const Eigen::Index k = t < ell ? 1 : std::min<Eigen::Index>(m, sys.T - t + 1);
    Matrix gram = Matrix::Zero(sys.d_x, sys.d_x);
    Matrix phi = Matrix::Identity(sys.d_x, sys.d_x);
    for (Eigen::Index tau = t; tau <= t + k - 1; ++tau) {
      gram.noalias() += phi.transpose() * sys.Q[tau] * phi;
      if (tau + 1 <= t + k - 1) phi = sys.A[tau] * phi;
    }
    gram = 0.5 * (gram + gram.transpose());
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, min_eig(gram));
    rep.gramians.push_back(gram);
    rep.k.push_back(k);
  }
  return rep;
}

namespace {

struct NoiseRoots {
  Matrix init;
  std::vector<Matrix> w, v;
};

NoiseRoots noise_roots(const LqgSystem& sys) {
  NoiseRoots roots;
  roots.init = psd_sqrt(sys.Sigma0);
  for (Eigen::Index t = 0; t < sys.T; ++t) roots.w.push_back(psd_sqrt(sys.Sigma_w[t]));
  for (Eigen::Index t = 0; t <= sys.T; ++t) roots.v.push_back(psd_sqrt(sys.Sigma_v[t]));
  return roots;
}

Trajectory simulate_with_roots(const LqgSystem& sys, const NoiseRoots& roots,
                               const Policy& policy, std::uint64_t seed) {
  Trajectory traj;
  traj.y.reserve(sys.T + 1);
  traj.u.reserve(sys.T);
  traj.c.reserve(sys.T + 1);
  traj.x.reserve(sys.T + 1);

  CounterRng init_rng(seed, StreamKind::kInitState);
  Vector x = roots.init * init_rng.normal_vector(sys.d_x);
  for (Eigen::Index t = 0; t <= sys.T; ++t) {
    CounterRng obs_rng(seed, StreamKind::kObsNoise, static_cast<std::uint64_t>(t));
    traj.x.push_back(x);
    traj.y.push_back(sys.C[t] * x + roots.v[t] * obs_rng.normal_vector(sys.d_y));
    if (t == sys.T) {
      traj.c.push_back(x.dot(sys.Q[t] * x));
      break;
    }
    Vector u = policy(traj, t);
    if (u.size() != sys.d_u)
      throw ValidationError("simulate: policy returned control of dimension " +
                            std::to_string(u.size()) + ", expected " +
                            std::to_string(sys.d_u));
    traj.u.push_back(u);
    traj.c.push_back(x.dot(sys.Q[t] * x) + u.dot(sys.R[t] * u));
    CounterRng w_rng(seed, StreamKind::kProcessNoise, static_cast<std::uint64_t>(t));
    x = sys.A[t] * x + sys.B[t] * u + roots.w[t] * w_rng.normal_vector(sys.d_x);
  }
  return traj;
}

}  // namespace

Trajectory simulate(const LqgSystem& sys, const Policy& policy, std::uint64_t seed) {
  return simulate_with_roots(sys, noise_roots(sys), policy, seed);
}

Policy exploration_policy(const LqgSystem& sys, double sigma_u, std::uint64_t seed) {
  const Eigen::Index d_u = sys.d_u;
  return [d_u, sigma_u, seed](const Trajectory&, Eigen::Index t) {
    CounterRng rng(seed, StreamKind::kControl, static_cast<std::uint64_t>(t));
    return Vector(sigma_u * rng.normal_vector(d_u));
  };
}

Dataset collect_dataset(const LqgSystem& sys, double sigma_u, Eigen::Index n,
                        std::uint64_t master_seed, const std::string& system_tag) {
  require(sigma_u > 0.0, "collect_dataset: sigma_u must be positive");
  require(n >= 1, "collect_dataset: n must be >= 1");
  const NoiseRoots roots = noise_roots(sys);
  Dataset ds;
  ds.system_tag = system_tag;
  ds.n = n;
  ds.sigma_u = sigma_u;
  ds.master_seed = master_seed;
  ds.trajectories.resize(n);
  parallel_for(n, [&](std::int64_t i) {
    const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(i));
    ds.trajectories[i] =
        simulate_with_roots(sys, roots, exploration_policy(sys, sigma_u, seed), seed);
  });
  return ds;
}

namespace {

Matrix full_rank_gaussian(CounterRng& rng, Eigen::Index rows, Eigen::Index cols,
                          const char* name) {
  for (int attempt = 0; attempt < 10; ++attempt) {
    Matrix m = rng.normal_matrix(rows, cols);
    Eigen::JacobiSVD<Matrix> svd(m);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smax > 0.0 && smin > 1e-3 * smax) return m;
  }
  throw NumericalError(std::string("random_system: full-rank retries exhausted for ") +
                       name);
}

Matrix random_spd(CounterRng& rng, Eigen::Index d, double scale, double floor) {
  const Matrix g = rng.normal_matrix(d, d);
  Matrix s = scale * (g * g.transpose() / static_cast<double>(d)) +
             floor * Matrix::Identity(d, d);
  return 0.5 * (s + s.transpose());
}

}  // namespace

LqgSystem random_system(const RandomSystemSpec& spec, std::uint64_t seed) {
  if (spec.mode == FixtureMode::kRankDeficientEarly &&
      !(spec.d_u < spec.d_x))
    throw ValidationError("random_system: rank_deficient_early requires d_u < d_x");
  if (!(spec.rho_target > 0.0 && spec.rho_target < 1.0))
    throw ValidationError("random_system: rho_target must lie in (0, 1)");

  LqgSystem sys;
  sys.T = spec.T;
  sys.d_x = spec.d_x;
  sys.d_y = spec.d_y;
  sys.d_u = spec.d_u;
  for (Eigen::Index t = 0; t < spec.T; ++t) {
    const auto step = static_cast<std::uint64_t>(t);
    CounterRng rng_a(seed, StreamKind::kGenA, step);
    Matrix a = rng_a.normal_matrix(spec.d_x, spec.d_x);
    const double norm = op_norm(a);
    if (norm > 0.0) a *= spec.rho_target / norm;
    sys.A.push_back(a);

    CounterRng rng_b(seed, StreamKind::kGenB, step);
    Matrix b = full_rank_gaussian(rng_b, spec.d_x, spec.d_u, "B");
    // Unit operator norm keeps the closed-loop signal scales comparable
    // across draws, which keeps history covariances well conditioned.
    sys.B.push_back(b / op_norm(b));

    CounterRng rng_r(seed, StreamKind::kGenR, step);
    sys.R.push_back(random_spd(rng_r, spec.d_u, spec.cost_scale, spec.r_floor));

    CounterRng rng_w(seed, StreamKind::kGenSigmaW, step);
    sys.Sigma_w.push_back(
        random_spd(rng_w, spec.d_x, 0.5 * spec.w_scale * spec.w_scale,
                   0.5 * spec.w_scale * spec.w_scale));
  }
  for (Eigen::Index t = 0; t <= spec.T; ++t) {
    const auto step = static_cast<std::uint64_t>(t);
    CounterRng rng_c(seed, StreamKind::kGenC, step);
    Matrix c = full_rank_gaussian(rng_c, spec.d_y, spec.d_x, "C");
    sys.C.push_back(c / op_norm(c));

    CounterRng rng_q(seed, StreamKind::kGenQ, step);
    sys.Q.push_back(random_spd(rng_q, spec.d_x, spec.cost_scale, spec.q_floor));

    CounterRng rng_v(seed, StreamKind::kGenSigmaV, step);
    sys.Sigma_v.push_back(
        random_spd(rng_v, spec.d_y, 0.5 * spec.v_scale * spec.v_scale,
                   0.5 * spec.v_scale * spec.v_scale));
  }
  CounterRng rng_0(seed, StreamKind::kGenSigma0);
  sys.Sigma0 = random_spd(rng_0, spec.d_x, 0.5 * spec.init_scale * spec.init_scale,
                          0.5 * spec.init_scale * spec.init_scale);
  sys.validate();
  return sys;
}

}  // namespace lqg
