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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "lqg/errors.hpp"
#include "lqg/io.hpp"
#include "lqg/rng.hpp"

using lqg::LqgSystem;
using lqg::Matrix;
using lqg::Vector;

namespace {

// LTI scalar/diagonal helper system.
LqgSystem make_lti(Eigen::Index d_x, Eigen::Index d_y, Eigen::Index d_u,
                   Eigen::Index T, double a, double noise = 0.0) {
  LqgSystem sys;
  sys.T = T;
  sys.d_x = d_x;
  sys.d_y = d_y;
  sys.d_u = d_u;
  for (Eigen::Index t = 0; t < T; ++t) {
    sys.A.push_back(a * Matrix::Identity(d_x, d_x));
    sys.B.push_back(Matrix::Identity(d_x, d_u));
    sys.R.push_back(Matrix::Identity(d_u, d_u));
    sys.Sigma_w.push_back(noise * Matrix::Identity(d_x, d_x));
  }
  for (Eigen::Index t = 0; t <= T; ++t) {
    sys.C.push_back(Matrix::Identity(d_y, d_x));
    sys.Q.push_back(Matrix::Identity(d_x, d_x));
    sys.Sigma_v.push_back(noise * Matrix::Identity(d_y, d_y));
  }
  sys.Sigma0 = noise * Matrix::Identity(d_x, d_x);
  return sys;
}

lqg::Policy zero_policy(Eigen::Index d_u) {
  return [d_u](const lqg::Trajectory&, Eigen::Index) {
    return Vector(Vector::Zero(d_u));
  };
}

bool bit_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

}  // namespace

TEST_CASE("validate rejects malformed systems") {
  LqgSystem sys = make_lti(2, 2, 1, 3, 0.5);
  CHECK_NOTHROW(sys.validate());
  LqgSystem bad = sys;
  bad.R[0] = Matrix::Zero(1, 1);  // not positive definite
  CHECK_THROWS_AS(bad.validate(), lqg::ValidationError);
  bad = sys;
  bad.A.pop_back();
  CHECK_THROWS_AS(bad.validate(), lqg::ValidationError);
}

TEST_CASE("check_stability") {
  LqgSystem zero = make_lti(2, 2, 2, 4, 0.0);
  CHECK(lqg::check_stability(zero, 0.5, 0.5).pass);

  LqgSystem stable = make_lti(2, 2, 2, 4, 0.9);
  const auto rep = lqg::check_stability(stable, 1.0, 0.9);
  CHECK(rep.pass);
  CHECK(rep.worst_ratio == doctest::Approx(1.0));

  LqgSystem unstable = make_lti(2, 2, 2, 4, 1.1);
  const auto bad = lqg::check_stability(unstable, 1.0, 0.95);
  CHECK(!bad.pass);
  // The worst pair is the longest horizon product: (1.1/0.95)^T maximal.
  CHECK(bad.worst_t0 == 0);
  CHECK(bad.worst_t == 4);
  CHECK(bad.worst_norm == doctest::Approx(std::pow(1.1, 4)));
}

TEST_CASE("check_controllability") {
  // A = [[0,1],[0,0]], B = [0;1]: controllability matrix is a permutation.
  LqgSystem sys = make_lti(2, 2, 1, 3, 0.0);
  Matrix a(2, 2);
  a << 0, 1, 0, 0;
  Matrix b(2, 1);
  b << 0, 1;
  for (auto& at : sys.A) at = a;
  for (auto& bt : sys.B) bt = b;
  const auto rep = lqg::check_controllability(sys, 2);
  CHECK(rep.all_full_rank);
  CHECK(rep.min_sigma == doctest::Approx(1.0));

  for (auto& bt : sys.B) bt = Matrix::Zero(2, 1);
  const auto none = lqg::check_controllability(sys, 2);
  CHECK(!none.all_full_rank);
  CHECK(none.min_sigma == doctest::Approx(0.0));

  LqgSystem full = make_lti(2, 2, 2, 3, 0.5);
  CHECK(lqg::check_controllability(full, 1).all_full_rank);
}

TEST_CASE("cost_observability_gramians") {
  // Zero dynamics: every Gramian is Q regardless of window.
  LqgSystem zero = make_lti(2, 2, 2, 4, 0.0);
  const auto rep = lqg::cost_observability_gramians(zero, 2, 3);
  for (const Matrix& g : rep.gramians)
    CHECK(g.isApprox(Matrix::Identity(2, 2), 1e-12));

  // k = 1 everywhere when t < ell = T.
  LqgSystem lti = make_lti(1, 1, 1, 4, 1.0);
  const auto single = lqg::cost_observability_gramians(lti, 4, 3);
  for (Eigen::Index t = 0; t < 4; ++t) {
    CHECK(single.k[t] == 1);
    CHECK(single.gramians[t](0, 0) == doctest::Approx(1.0));
  }

  // Scalar A = 1, Q = 1, m = 3, interior t: three unit terms.
  const auto interior = lqg::cost_observability_gramians(lti, 1, 3);
  CHECK(interior.gramians[1](0, 0) == doctest::Approx(3.0));
  CHECK(interior.k[1] == 3);
  // Horizon clipping: k = min(m, T - t + 1).
  CHECK(interior.k[4] == 1);
  CHECK(interior.k[3] == 2);
}

TEST_CASE("simulate determinism and zero rollout") {
  LqgSystem noiseless = make_lti(2, 2, 2, 3, 0.5, 0.0);
  const auto traj = lqg::simulate(noiseless, zero_policy(2), 42);
  for (double c : traj.c) CHECK(c == 0.0);

  LqgSystem noisy = make_lti(2, 2, 2, 3, 0.5, 1.0);
  const auto t1 = lqg::simulate(noisy, zero_policy(2), 42);
  const auto t2 = lqg::simulate(noisy, zero_policy(2), 42);
  for (Eigen::Index t = 0; t <= 3; ++t) {
    CHECK(bit_equal(t1.y[t], t2.y[t]));
    CHECK(t1.c[t] == t2.c[t]);
  }
  const auto t3 = lqg::simulate(noisy, zero_policy(2), 43);
  CHECK(!bit_equal(t1.y[0], t3.y[0]));

  // Policy dimension guard.
  CHECK_THROWS_AS(lqg::simulate(noisy, zero_policy(1), 1), lqg::ValidationError);
}

TEST_CASE("simulate chi-squared mean") {
  // Zero dynamics, Sigma_0 = I, Q = I: E[c_0] = d_x.
  LqgSystem sys = make_lti(3, 3, 3, 1, 0.0, 0.0);
  sys.Sigma0 = Matrix::Identity(3, 3);
  const int n = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto traj =
        lqg::simulate(sys, zero_policy(3), lqg::derive_seed(99, i));
    sum += traj.c[0];
    sumsq += traj.c[0] * traj.c[0];
  }
  const double mean = sum / n;
  const double stderr =
      std::sqrt((sumsq / n - mean * mean) / static_cast<double>(n - 1));
  CHECK(std::abs(mean - 3.0) <= 3.0 * stderr);
}

TEST_CASE("trajectory cost identity") {
  const lqg::RandomSystemSpec spec;
  const LqgSystem sys = lqg::random_system(spec, 2024);
  const auto ds = lqg::collect_dataset(sys, 1.0, 20, 5);
  for (const auto& traj : ds.trajectories) {
    for (Eigen::Index t = 0; t <= sys.T; ++t) {
      double expect = traj.x[t].dot(sys.Q[t] * traj.x[t]);
      if (t < sys.T) expect += traj.u[t].dot(sys.R[t] * traj.u[t]);
      CHECK(std::abs(traj.c[t] - expect) <= 1e-9 * (1.0 + std::abs(expect)));
    }
  }
}

TEST_CASE("collect_dataset reproducibility and moments") {
  const lqg::RandomSystemSpec spec;
  const LqgSystem sys = lqg::random_system(spec, 7);

  const auto a = lqg::collect_dataset(sys, 1.0, 8, 123, "tag");
  const auto b = lqg::collect_dataset(sys, 1.0, 8, 123, "tag");
  const auto single = lqg::simulate(
      sys, lqg::exploration_policy(sys, 1.0, lqg::derive_seed(123, 0)),
      lqg::derive_seed(123, 0));
  CHECK(bit_equal(a.trajectories[0].y[0], single.y[0]));
  CHECK(a.trajectories[0].c == single.c);
  for (Eigen::Index i = 0; i < 8; ++i) {
    CHECK(bit_equal(a.trajectories[i].y[2], b.trajectories[i].y[2]));
    CHECK(!bit_equal(a.trajectories[i].y[0], a.trajectories[(i + 1) % 8].y[0]));
  }

  // Empirical Cov(u_t) close to sigma_u^2 I.
  const double sigma_u = 0.7;
  const auto big = lqg::collect_dataset(sys, sigma_u, 10000, 321);
  Matrix cov = Matrix::Zero(sys.d_u, sys.d_u);
  for (const auto& traj : big.trajectories)
    cov += traj.u[1] * traj.u[1].transpose();
  cov /= static_cast<double>(big.n);
  CHECK((cov - sigma_u * sigma_u * Matrix::Identity(sys.d_u, sys.d_u)).norm() <=
        0.05 * sigma_u * sigma_u * std::sqrt(2.0) * 2.0);

  // Serialization determinism: identical bytes.
  const std::string p1 = "/tmp/lqg_test_ds1.dat";
  const std::string p2 = "/tmp/lqg_test_ds2.dat";
  lqg::save_dataset(a, sys, p1);
  lqg::save_dataset(b, sys, p2);
  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  CHECK(!s1.str().empty());
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("dataset save/load roundtrip and csv export") {
  const lqg::RandomSystemSpec spec;
  const LqgSystem sys = lqg::random_system(spec, 77);
  const auto ds = lqg::collect_dataset(sys, 1.0, 4, 55, "fix");
  const std::string path = "/tmp/lqg_test_roundtrip.dat";
  lqg::save_dataset(ds, sys, path);
  Eigen::Index T, d_x, d_y, d_u;
  const auto loaded = lqg::load_dataset(path, T, d_x, d_y, d_u);
  CHECK(T == sys.T);
  CHECK(d_y == sys.d_y);
  CHECK(loaded.system_tag == "fix");
  CHECK(loaded.n == 4);
  CHECK(loaded.master_seed == 55);
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index t = 0; t <= T; ++t) {
      CHECK(bit_equal(loaded.trajectories[i].y[t], ds.trajectories[i].y[t]));
      CHECK(loaded.trajectories[i].c[t] == ds.trajectories[i].c[t]);
      if (t < T) CHECK(bit_equal(loaded.trajectories[i].u[t], ds.trajectories[i].u[t]));
    }
  }
  std::remove(path.c_str());

  const std::string csv = "/tmp/lqg_test_export.csv";
  lqg::export_dataset_csv(ds, csv);
  std::ifstream is(csv);
  std::string header;
  std::getline(is, header);
  CHECK(header == "traj_id,t,kind,component_index,value");
  std::remove(csv.c_str());
}

TEST_CASE("random_system construction guarantees") {
  lqg::RandomSystemSpec spec;
  spec.rho_target = 0.8;
  const LqgSystem sys = lqg::random_system(spec, 31415);
  CHECK(lqg::check_stability(sys, 1.0, spec.rho_target + 1e-9).pass);
  CHECK(lqg::check_controllability(sys, 1).all_full_rank);  // d_u >= d_x

  const LqgSystem again = lqg::random_system(spec, 31415);
  CHECK(bit_equal(sys.A[0], again.A[0]));
  CHECK(bit_equal(sys.Sigma0, again.Sigma0));

  lqg::RandomSystemSpec bad;
  bad.mode = lqg::FixtureMode::kRankDeficientEarly;  // d_u = d_x = 2
  CHECK_THROWS_AS(lqg::random_system(bad, 1), lqg::ValidationError);
  bad.d_u = 1;
  CHECK_NOTHROW(lqg::random_system(bad, 1));
}

TEST_CASE("matrix block serialization roundtrip") {
  lqg::CounterRng rng(3, lqg::StreamKind::kMisc);
  std::vector<Matrix> blocks;
  for (int i = 0; i < 4; ++i) blocks.push_back(rng.normal_matrix(2 + i, 3));
  const std::string base = "/tmp/lqg_test_blocks";
  lqg::save_matrix_blocks(blocks, {{"theta", "0.25"}}, base);
  std::map<std::string, std::string> meta;
  const auto loaded = lqg::load_matrix_blocks(base, &meta);
  REQUIRE(loaded.size() == blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i)
    CHECK(bit_equal(loaded[i], blocks[i]));
  CHECK(meta.at("theta") == "0.25");
  std::remove((base + ".bin").c_str());
  std::remove((base + ".txt").c_str());
}
