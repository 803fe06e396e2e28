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

// End-to-end acceptance checks. Each criterion prints exactly one
// "PASS criterion-k ..." or "FAIL criterion-k ..." line; the process exits
// nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lqg/corel.hpp"
#include "lqg/evaluation.hpp"
#include "lqg/harness.hpp"
#include "lqg/linalg.hpp"
#include "lqg/normalization.hpp"
#include "lqg/oracle.hpp"
#include "lqg/quadreg.hpp"
#include "lqg/rng.hpp"
#include "lqg/sysid.hpp"
#include "lqg/system.hpp"

namespace {

using lqg::Matrix;
using lqg::Vector;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion-" << criterion << ": "
            << detail << std::endl;
  if (!pass) ++g_failures;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 == 1 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------
// Criterion 1: oracle consistency. The separation-principle policy achieves
// the closed-form optimal cost under Monte Carlo, and the unrolled history
// representation reproduces the recursive Kalman filter.
void criterion1() {
  lqg::RandomSystemSpec spec;
  spec.d_x = 2;
  spec.d_y = 2;
  spec.d_u = 2;
  spec.T = 6;
  const lqg::LqgSystem sys = lqg::random_system(spec, 11);
  const auto fs = lqg::filter_riccati(sys);
  const auto lqr = lqg::control_riccati(sys);

  const double j_star = lqg::optimal_cost_exact(sys, fs, lqr);
  const auto mc =
      lqg::evaluate_policy_mc(sys, lqg::oracle_policy(sys, fs, lqr), 20000, 42);
  const bool mc_ok = std::abs(mc.mean - j_star) <= 3.0 * mc.stderr;

  const auto rep = lqg::build_history_representation(sys, fs);
  double max_dev = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto traj = lqg::simulate(
        sys, lqg::exploration_policy(sys, 1.0, lqg::derive_seed(7, seed)),
        lqg::derive_seed(7, seed));
    const auto run = lqg::kalman_filter(sys, fs, traj.y, traj.u);
    const auto view = lqg::learner_view(traj);
    for (Eigen::Index t = 0; t <= sys.T; ++t) {
      const Vector h = lqg::build_history(view, t);
      max_dev = std::max(max_dev, (rep.M[t] * h - run.z[t]).norm());
    }
  }
  const bool rep_ok = max_dev <= 1e-8;
  report(1, mc_ok && rep_ok,
         "oracle MC gap " + fmt(mc.mean - j_star) + " (3*stderr " +
             fmt(3.0 * mc.stderr) + "), filter/representation deviation " +
             fmt(max_dev));
}

// ---------------------------------------------------------------------------
// Criterion 2: quadratic regression error decays at the n^{-1/2} parametric
// rate with subexponential (product-normal) noise.
void criterion2() {
  const Eigen::Index d = 3;
  Matrix n_star(d, d);
  n_star << 1.0, 0.3, -0.2, 0.3, 2.0, 0.5, -0.2, 0.5, 0.8;
  const double b_star = 0.7;
  std::vector<double> slopes;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::vector<std::pair<double, double>> points;
    for (int exp2 = 10; exp2 <= 16; exp2 += 2) {
      const Eigen::Index n = Eigen::Index(1) << exp2;
      lqg::CounterRng rng(lqg::derive_seed(seed, exp2), lqg::StreamKind::kMisc);
      std::vector<Vector> h(n);
      std::vector<double> y(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        h[i] = rng.normal_vector(d);
        y[i] = h[i].dot(n_star * h[i]) + b_star + rng.normal() * rng.normal();
      }
      const auto fit = lqg::fit_quadratic(h, y);
      points.emplace_back(static_cast<double>(n), (fit.N_hat - n_star).norm());
    }
    slopes.push_back(lqg::rate_fit(points).slope);
  }
  const double med = median(slopes);
  report(2, med >= -0.65 && med <= -0.35,
         "quadratic regression rate slope " + fmt(med) + " in [-0.65, -0.35]");
}

// ---------------------------------------------------------------------------
// Criteria 3, 5, 6 share one sweep on the well-conditioned fixture.
struct SweepResult {
  // metric -> n -> per-seed values.
  std::map<std::string, std::map<Eigen::Index, std::vector<double>>> data;
  double zero_gap = 0.0;
};

SweepResult sweep(const lqg::RandomSystemSpec& spec, std::uint64_t fixture_seed,
                  Eigen::Index ell, Eigen::Index m, double sigma_u,
                  int max_exp2, bool e2e) {
  const lqg::LqgSystem sys = lqg::random_system(spec, fixture_seed);
  const auto ns = lqg::normalize(sys, ell, m);
  const auto nfs = lqg::filter_riccati(ns.system);
  const auto nrep = lqg::build_history_representation(ns.system, nfs);

  SweepResult out;
  out.zero_gap = lqg::zero_control_gap(sys);
  for (int exp2 = 10; exp2 <= max_exp2; ++exp2) {
    const Eigen::Index n = Eigen::Index(1) << exp2;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const std::uint64_t master =
          lqg::derive_seed(seed, static_cast<std::uint64_t>(n));
      const auto ds = lqg::collect_dataset(sys, sigma_u, n, master);
      lqg::CorelConfig cc;
      cc.d_x = spec.d_x;
      cc.ell = ell;
      cc.m = m;
      auto [rep, lds] = lqg::corel(ds, cc, sys.R);
      auto [A, B] = lqg::fit_dynamics(lds);
      lqg::LatentModel model{std::move(A), std::move(B),
                             lqg::fit_costs(lds, sys.R, ell), sys.R};
      const auto ctl = lqg::plan(model);
      const auto align = lqg::representation_error(rep, nrep);

      double early = 0.0, late = 0.0;
      for (Eigen::Index t = 0; t <= sys.T; ++t)
        (t < ell ? early : late) =
            std::max(t < ell ? early : late, align.rep_err_op[t]);
      out.data["rep_err_early_max"][n].push_back(early);
      out.data["rep_err_late_max"][n].push_back(late);
      out.data["ctl_gap_late"][n].push_back(lqg::controller_suboptimality(
          ns, align, ctl, ell, sigma_u, lqg::Segment::kLate));
      if (e2e && (exp2 == 10 || exp2 == max_exp2)) {
        const auto policy = lqg::assemble_policy(rep, ctl);
        const auto gap = lqg::end_to_end_gap(sys, policy, 4000,
                                             lqg::derive_seed(master, 0xE2EULL));
        out.data["e2e_gap"][n].push_back(gap.gap);
      }
    }
  }
  return out;
}

lqg::RateFit slope_of(const SweepResult& sr, const std::string& metric) {
  std::vector<std::pair<double, double>> points;
  for (const auto& [n, vals] : sr.data.at(metric)) {
    const double med = median(vals);
    if (med > 0.0) points.emplace_back(static_cast<double>(n), med);
  }
  return lqg::rate_fit(points);
}

void criteria_3_5_6(const SweepResult& sr) {
  const double rep_slope = slope_of(sr, "rep_err_late_max").slope;
  report(3, rep_slope >= -0.70 && rep_slope <= -0.30,
         "late representation error slope " + fmt(rep_slope) +
             " in [-0.70, -0.30]");

  const double ctl_slope = slope_of(sr, "ctl_gap_late").slope;
  report(5, ctl_slope >= -1.4 && ctl_slope <= -0.6,
         "late controller gap slope " + fmt(ctl_slope) + " in [-1.4, -0.6]");

  const auto& e2e = sr.data.at("e2e_gap");
  const double small_n = median(e2e.begin()->second);
  const double large_n = median(e2e.rbegin()->second);
  report(6, large_n < sr.zero_gap && large_n < small_n,
         "end-to-end gap at n=2^14 " + fmt(large_n) + " < zero-control gap " +
             fmt(sr.zero_gap) + " and < gap at n=2^10 " + fmt(small_n));
}

// ---------------------------------------------------------------------------
// Criterion 4: on the rank-deficient-early fixture, the truncated early
// representation error still decays with n.
void criterion4() {
  lqg::RandomSystemSpec spec;
  spec.d_x = 2;
  spec.d_y = 3;
  spec.d_u = 1;
  spec.T = 6;
  spec.w_scale = 0.3;
  spec.v_scale = 1.0;
  spec.mode = lqg::FixtureMode::kRankDeficientEarly;
  const auto sr = sweep(spec, 23, /*ell=*/2, /*m=*/2, /*sigma_u=*/0.7,
                        /*max_exp2=*/14, /*e2e=*/false);
  const double slope = slope_of(sr, "rep_err_early_max").slope;
  report(4, slope <= -0.15,
         "rank-deficient early representation error slope " + fmt(slope) +
             " <= -0.15");
}

// ---------------------------------------------------------------------------
// Criterion 7: key structural invariants.
void criterion7() {
  bool ok = true;
  std::string detail = "invariants hold";
  try {
    lqg::RandomSystemSpec spec;
    spec.d_x = 2;
    spec.d_y = 3;
    spec.d_u = 2;
    spec.T = 5;
    const lqg::LqgSystem sys = lqg::random_system(spec, 31);

    // Normalization puts every Gramian at the identity and round-trips.
    const auto ns = lqg::normalize(sys, 1, 2);
    const auto nrm = lqg::verify_normalization(ns, 1, 2);
    if (nrm.max_gramian_deviation > 1e-6 || nrm.max_roundtrip_deviation > 1e-8) {
      ok = false;
      detail = "normalization deviation " + fmt(nrm.max_gramian_deviation);
    }

    // CoReL output obeys the rank bound and the truncation contract.
    const auto ds = lqg::collect_dataset(sys, 1.0, 512, 3);
    lqg::CorelConfig cc;
    cc.d_x = 2;
    cc.ell = 2;
    cc.m = 2;
    const auto [rep, lds] = lqg::corel(ds, cc, sys.R);
    for (Eigen::Index t = 0; t <= sys.T && ok; ++t) {
      Eigen::JacobiSVD<Matrix> svd(rep.M[t]);
      Eigen::Index rank = 0;
      for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        const double s = svd.singularValues()[i];
        if (s > 0.0) {
          ++rank;
          if (t < cc.ell && s < rep.theta - 1e-12) {
            ok = false;
            detail = "truncation contract violated at t=" + std::to_string(t);
          }
        }
      }
      if (rank > cc.d_x) {
        ok = false;
        detail = "rank bound violated at t=" + std::to_string(t);
      }
    }

    // Procrustes alignments are orthonormal; gaps are nonnegative.
    const auto nfs = lqg::filter_riccati(ns.system);
    const auto nrep = lqg::build_history_representation(ns.system, nfs);
    const auto align = lqg::representation_error(rep, nrep);
    for (Eigen::Index t = 0; t <= sys.T && ok; ++t) {
      const Matrix gram = align.S[t].transpose() * align.S[t];
      if (!gram.isIdentity(1e-9)) {
        ok = false;
        detail = "alignment not orthonormal at t=" + std::to_string(t);
      }
    }
    auto [A, B] = lqg::fit_dynamics(lds);
    lqg::LatentModel model{std::move(A), std::move(B),
                           lqg::fit_costs(lds, sys.R, cc.ell), sys.R};
    const auto ctl = lqg::plan(model);
    for (lqg::Segment seg : {lqg::Segment::kEarly, lqg::Segment::kLate}) {
      const double gap =
          lqg::controller_suboptimality(ns, align, ctl, cc.ell, 1.0, seg);
      if (gap < -1e-8) {
        ok = false;
        detail = "negative controller gap " + fmt(gap);
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(7, ok, detail);
}

// ---------------------------------------------------------------------------
// Criterion 8: the harness pipeline is bit-reproducible.
void criterion8() {
  namespace fs = std::filesystem;
  bool ok = true;
  std::string detail;
  try {
    lqg::ExperimentConfig cfg;
    cfg.fixture_name = "accept";
    cfg.fixture.d_x = 2;
    cfg.fixture.d_y = 2;
    cfg.fixture.d_u = 2;
    cfg.fixture.T = 4;
    cfg.fixture_seed = 5;
    cfg.ell = 1;
    cfg.m = 2;
    cfg.n_grid = {128};
    cfg.seeds = {1, 2};
    cfg.n_mc = 200;

    auto slurp = [](const std::string& path) {
      std::ifstream is(path, std::ios::binary);
      std::ostringstream os;
      os << is.rdbuf();
      return os.str();
    };
    cfg.out_dir = "acceptance_out_a";
    const std::string a = slurp(lqg::cmd_run(cfg));
    cfg.out_dir = "acceptance_out_b";
    const std::string b = slurp(lqg::cmd_run(cfg));
    ok = !a.empty() && a == b;
    detail = ok ? "two pipeline runs produced byte-identical results ("
                      + std::to_string(a.size()) + " bytes)"
                : "pipeline runs differ";
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  report(8, ok, detail);
}

}  // namespace

int main() {
  criterion1();
  criterion2();

  lqg::RandomSystemSpec spec;
  spec.d_x = 2;
  spec.d_y = 3;
  spec.d_u = 2;
  spec.T = 6;
  spec.w_scale = 0.3;
  spec.v_scale = 1.0;
  const auto sr = sweep(spec, 17, /*ell=*/1, /*m=*/2, /*sigma_u=*/0.7,
                        /*max_exp2=*/14, /*e2e=*/true);
  criteria_3_5_6(sr);

  criterion4();
  criterion7();
  criterion8();

  std::cout << (g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL")
            << " (" << g_failures << " failing criteria)" << std::endl;
  return g_failures == 0 ? 0 : 1;
}
