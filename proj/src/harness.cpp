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

#include "lqg/harness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "lqg/corel.hpp"
#include "lqg/errors.hpp"
#include "lqg/evaluation.hpp"
#include "lqg/io.hpp"
#include "lqg/normalization.hpp"
#include "lqg/oracle.hpp"
#include "lqg/quadreg.hpp"
#include "lqg/rng.hpp"
#include "lqg/sysid.hpp"

namespace lqg {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("config parse error in " + path + ": " + e.what());
  }
  return j;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::string cell_tag(const ExperimentConfig& cfg, Eigen::Index n,
                     std::uint64_t seed) {
  return cfg.fixture_name + "_n" + std::to_string(n) + "_s" + std::to_string(seed);
}

struct CellResult {
  AlignmentResult align;
  StateRepresentation rep;
  LatentModel model;
  Controller ctl;
  double ctl_gap_early = 0.0;
  double ctl_gap_late = 0.0;
  GapEstimate e2e;
  bool ran_sysid = false;
  bool ran_eval = false;
  bool ran_e2e = false;
};

CellResult run_cell(const ExperimentConfig& cfg, const LqgSystem& sys,
                    const NormalizedSystem& ns,
                    const HistoryRepresentation& oracle_rep, Eigen::Index n,
                    std::uint64_t seed) {
  const std::uint64_t master = derive_seed(seed, static_cast<std::uint64_t>(n));
  const Dataset ds = collect_dataset(sys, cfg.sigma_u, n, master, cfg.fixture_name);

  CorelConfig cc;
  cc.d_x = cfg.fixture.d_x;
  cc.ell = cfg.ell;
  cc.m = cfg.m;
  cc.theta = cfg.theta;
  cc.c_theta = cfg.c_theta;

  CellResult out;
  auto [rep, lds] = corel(ds, cc, sys.R);
  out.rep = std::move(rep);

  if (cfg.run_sysid) {
    auto [A, B] = fit_dynamics(lds);
    out.model = LatentModel{std::move(A), std::move(B),
                            fit_costs(lds, sys.R, cfg.ell), sys.R};
    out.ctl = plan(out.model);
    out.ran_sysid = true;
  }

  if (cfg.run_eval) {
    out.align = representation_error(out.rep, oracle_rep);
    if (out.ran_sysid) {
      out.ctl_gap_early =
          controller_suboptimality(ns, out.align, out.ctl, cfg.ell, cfg.sigma_u,
                                   Segment::kEarly);
      out.ctl_gap_late =
          controller_suboptimality(ns, out.align, out.ctl, cfg.ell, cfg.sigma_u,
                                   Segment::kLate);
    }
    out.ran_eval = true;
  }
  if (cfg.run_e2e && out.ran_sysid) {
    const Policy policy = assemble_policy(out.rep, out.ctl);
    out.e2e = end_to_end_gap(sys, policy, cfg.n_mc,
                             derive_seed(master, 0xE2EULL));
    out.ran_e2e = true;
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  const json j = load_json(path);
  ExperimentConfig cfg;
  try {
    const json& f = j.at("fixture");
    cfg.fixture_name = f.value("name", cfg.fixture_name);
    cfg.fixture.d_x = f.at("d_x").get<Eigen::Index>();
    cfg.fixture.d_y = f.at("d_y").get<Eigen::Index>();
    cfg.fixture.d_u = f.at("d_u").get<Eigen::Index>();
    cfg.fixture.T = f.at("T").get<Eigen::Index>();
    cfg.fixture.rho_target = f.value("rho", cfg.fixture.rho_target);
    cfg.fixture.w_scale = f.value("w_scale", cfg.fixture.w_scale);
    cfg.fixture.v_scale = f.value("v_scale", cfg.fixture.v_scale);
    cfg.fixture.init_scale = f.value("init_scale", cfg.fixture.init_scale);
    cfg.fixture.cost_scale = f.value("cost_scale", cfg.fixture.cost_scale);
    cfg.fixture.q_floor = f.value("q_floor", cfg.fixture.q_floor);
    cfg.fixture.r_floor = f.value("r_floor", cfg.fixture.r_floor);
    const std::string mode = f.value("mode", std::string("generic"));
    if (mode == "generic") {
      cfg.fixture.mode = FixtureMode::kGeneric;
    } else if (mode == "rank_deficient_early") {
      cfg.fixture.mode = FixtureMode::kRankDeficientEarly;
    } else {
      throw ValidationError("config: unknown fixture mode " + mode);
    }
    cfg.fixture_seed = f.value("seed", cfg.fixture_seed);

    cfg.sigma_u = j.value("sigma_u", cfg.sigma_u);
    cfg.ell = j.at("ell").get<Eigen::Index>();
    cfg.m = j.at("m").get<Eigen::Index>();
    cfg.theta = j.value("theta", cfg.theta);
    cfg.c_theta = j.value("c_theta", cfg.c_theta);
    cfg.n_grid = j.at("n_grid").get<std::vector<Eigen::Index>>();
    cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    cfg.n_mc = j.value("n_mc", cfg.n_mc);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.run_corel = j.value("run_corel", true);
    cfg.run_sysid = j.value("run_sysid", true);
    cfg.run_eval = j.value("run_eval", true);
    cfg.run_e2e = j.value("run_e2e", true);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config field error: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (n_grid.empty()) throw ValidationError("config: n_grid must be nonempty");
  for (std::size_t i = 0; i + 1 < n_grid.size(); ++i)
    if (n_grid[i] >= n_grid[i + 1])
      throw ValidationError("config: n_grid must be strictly increasing");
  for (Eigen::Index n : n_grid)
    if (n < 1) throw ValidationError("config: n values must be >= 1");
  if (seeds.empty()) throw ValidationError("config: need at least one seed");
  if (!(sigma_u > 0.0)) throw ValidationError("config: sigma_u must be positive");
  if (ell < 1 || ell > fixture.T) throw ValidationError("config: ell out of range");
  if (m < 1) throw ValidationError("config: m must be >= 1");
}

LqgSystem ExperimentConfig::make_system() const {
  return random_system(fixture, fixture_seed);
}

std::string cmd_check(const ExperimentConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const LqgSystem sys = cfg.make_system();
  const std::string path = cfg.out_dir + "/check_report.txt";
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "fixture " << cfg.fixture_name << "\n";

  const double rho = std::min(0.999999, cfg.fixture.rho_target + 1e-9);
  const StabilityReport stab = check_stability(sys, 1.0, rho);
  os << "stability (alpha=1, rho=" << fmt(rho) << "): "
     << (stab.pass ? "pass" : "FAIL") << " worst_ratio=" << fmt(stab.worst_ratio)
     << " at (t0=" << stab.worst_t0 << ", t=" << stab.worst_t << ")\n";

  const ControllabilityReport ctrb = check_controllability(sys, cfg.ell);
  os << "controllability (ell=" << cfg.ell << "): "
     << (ctrb.all_full_rank ? "pass" : "FAIL") << " nu=" << fmt(ctrb.min_sigma)
     << "\n";

  const GramianReport gram = cost_observability_gramians(sys, cfg.ell, cfg.m);
  os << "cost observability (m=" << cfg.m
     << "): " << (gram.min_eigenvalue > 0.0 ? "pass" : "FAIL")
     << " mu2=" << fmt(gram.min_eigenvalue) << "\n";
  os << "k-rule:";
  for (Eigen::Index t = 0; t <= sys.T; ++t) os << ' ' << t << "->" << gram.k[t];
  os << "\n";

  os << "observation noise floor: ";
  double sv_floor = std::numeric_limits<double>::infinity();
  for (const Matrix& sv : sys.Sigma_v)
    sv_floor = std::min(sv_floor,
                        Eigen::SelfAdjointEigenSolver<Matrix>(sv).eigenvalues()
                            .minCoeff());
  os << (sv_floor > 0.0 ? "pass" : "FAIL") << " min_eig=" << fmt(sv_floor) << "\n";

  // beta: min positive singular value of the normalized oracle representation
  // over the early steps (Assumption 5).
  const NormalizedSystem ns = normalize(sys, cfg.ell, cfg.m);
  const FilterSolution nfs = filter_riccati(ns.system);
  const HistoryRepresentation nrep = build_history_representation(ns.system, nfs);
  double beta = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t < cfg.ell; ++t) {
    Eigen::JacobiSVD<Matrix> svd(nrep.M[t]);
    const double smax = svd.singularValues().maxCoeff();
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
      const double s = svd.singularValues()[i];
      if (s > 1e-10 * smax) beta = std::min(beta, s);
    }
  }
  os << "beta (min positive sv of M*' for t < ell): " << fmt(beta) << "\n";
  if (!os) throw IoError("write failure: " + path);
  return path;
}

void cmd_collect(const ExperimentConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const LqgSystem sys = cfg.make_system();
  bool exported = false;
  for (Eigen::Index n : cfg.n_grid) {
    for (std::uint64_t seed : cfg.seeds) {
      const std::uint64_t master = derive_seed(seed, static_cast<std::uint64_t>(n));
      const Dataset ds =
          collect_dataset(sys, cfg.sigma_u, n, master, cfg.fixture_name);
      const std::string base = cfg.out_dir + "/" + cell_tag(cfg, n, seed);
      save_dataset(ds, sys, base + ".dat");
      if (!exported) {
        export_dataset_csv(ds, base + ".csv");
        exported = true;
      }
    }
  }
}

void cmd_learn(const ExperimentConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const LqgSystem sys = cfg.make_system();
  const NormalizedSystem ns = normalize(sys, cfg.ell, cfg.m);
  const FilterSolution nfs = filter_riccati(ns.system);
  const HistoryRepresentation nrep = build_history_representation(ns.system, nfs);
  for (Eigen::Index n : cfg.n_grid) {
    for (std::uint64_t seed : cfg.seeds) {
      const CellResult cell = run_cell(cfg, sys, ns, nrep, n, seed);
      const std::string base = cfg.out_dir + "/" + cell_tag(cfg, n, seed);
      save_matrix_blocks(cell.rep.M,
                         {{"theta", fmt(cell.rep.theta)},
                          {"n", std::to_string(cell.rep.n)}},
                         base + "_rep");
      std::vector<Matrix> model_blocks;
      model_blocks.insert(model_blocks.end(), cell.model.A.begin(),
                          cell.model.A.end());
      model_blocks.insert(model_blocks.end(), cell.model.B.begin(),
                          cell.model.B.end());
      model_blocks.insert(model_blocks.end(), cell.model.Q.begin(),
                          cell.model.Q.end());
      save_matrix_blocks(model_blocks,
                         {{"layout", "A[0..T-1],B[0..T-1],Q[0..T]"},
                          {"T", std::to_string(cell.model.A.size())}},
                         base + "_model");
      save_matrix_blocks(cell.ctl.K, {{"kind", "gains"}}, base + "_ctl");
    }
  }
}

namespace {

std::string run_pipeline(const ExperimentConfig& cfg) {
  ensure_dir(cfg.out_dir);
  const LqgSystem sys = cfg.make_system();
  const NormalizedSystem ns = normalize(sys, cfg.ell, cfg.m);
  const FilterSolution nfs = filter_riccati(ns.system);
  const HistoryRepresentation nrep = build_history_representation(ns.system, nfs);
  const double zero_gap = zero_control_gap(sys);

  const std::string path = cfg.out_dir + "/results.csv";
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "fixture,n,seed,t,metric,value\n";

  auto row = [&](Eigen::Index n, std::uint64_t seed, Eigen::Index t,
                 const std::string& metric, double value) {
    os << cfg.fixture_name << ',' << n << ',' << seed << ',' << t << ','
       << metric << ',' << fmt(value) << '\n';
  };

  for (Eigen::Index n : cfg.n_grid) {
    for (std::uint64_t seed : cfg.seeds) {
      try {
        if (!cfg.run_corel) {
          // Nothing downstream of the representation can run.
          row(n, seed, -1, "zero_gap", zero_gap);
          continue;
        }
        const CellResult cell = run_cell(cfg, sys, ns, nrep, n, seed);
        if (cell.ran_eval) {
          double early_max = 0.0, late_max = 0.0;
          for (Eigen::Index t = 0; t <= sys.T; ++t) {
            row(n, seed, t, "rep_err", cell.align.rep_err_op[t]);
            if (t < cfg.ell)
              early_max = std::max(early_max, cell.align.rep_err_op[t]);
            else
              late_max = std::max(late_max, cell.align.rep_err_op[t]);
          }
          row(n, seed, -1, "rep_err_early_max", early_max);
          row(n, seed, -1, "rep_err_late_max", late_max);
          if (cell.ran_sysid) {
            row(n, seed, -1, "ctl_gap_early", cell.ctl_gap_early);
            row(n, seed, -1, "ctl_gap_late", cell.ctl_gap_late);
          }
        }
        row(n, seed, -1, "zero_gap", zero_gap);
        if (cell.ran_e2e) {
          // Conjectured-rate metric: reported, never bound to an exponent.
          row(n, seed, -1, "e2e_gap", cell.e2e.gap);
          row(n, seed, -1, "e2e_stderr", cell.e2e.stderr);
        }
      } catch (const std::exception&) {
        row(n, seed, -1, "failed", 1.0);
      }
    }
  }
  if (!os) throw IoError("write failure: " + path);
  return path;
}

}  // namespace

std::string cmd_run(const ExperimentConfig& cfg) { return run_pipeline(cfg); }

std::string cmd_evaluate(const ExperimentConfig& cfg) { return run_pipeline(cfg); }

std::string cmd_sweep_report(const std::string& results_path,
                             const std::string& out_dir) {
  ensure_dir(out_dir);
  std::ifstream is(results_path);
  if (!is) throw IoError("cannot open results file: " + results_path);
  std::string line;
  if (!std::getline(is, line) || line != "fixture,n,seed,t,metric,value")
    throw ValidationError("sweep-report: unexpected results header");

  // metric -> n -> per-seed values (aggregate rows only, t == -1).
  std::map<std::string, std::map<Eigen::Index, std::vector<double>>> data;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string fixture, n_s, seed_s, t_s, metric, value_s;
    if (!std::getline(ls, fixture, ',') || !std::getline(ls, n_s, ',') ||
        !std::getline(ls, seed_s, ',') || !std::getline(ls, t_s, ',') ||
        !std::getline(ls, metric, ',') || !std::getline(ls, value_s, ','))
      throw ValidationError("sweep-report: malformed row: " + line);
    if (t_s != "-1") continue;
    data[metric][std::stoll(n_s)].push_back(std::stod(value_s));
  }

  const std::string csv_path = out_dir + "/sweep_summary.csv";
  const std::string txt_path = out_dir + "/sweep_summary.txt";
  std::ofstream csv(csv_path);
  std::ofstream txt(txt_path);
  if (!csv || !txt) throw IoError("cannot open sweep summary outputs");
  csv << "metric,n,median\n";

  std::vector<std::pair<std::string, RateFit>> slopes;
  for (auto& [metric, by_n] : data) {
    if (metric == "failed" || metric == "e2e_stderr") continue;
    std::vector<std::pair<double, double>> points;
    for (auto& [n, vals] : by_n) {
      std::sort(vals.begin(), vals.end());
      const std::size_t k = vals.size();
      const double med =
          k % 2 == 1 ? vals[k / 2] : 0.5 * (vals[k / 2 - 1] + vals[k / 2]);
      csv << metric << ',' << n << ',' << fmt(med) << '\n';
      if (med > 0.0) points.emplace_back(static_cast<double>(n), med);
    }
    if (points.size() >= 3) {
      slopes.emplace_back(metric, rate_fit(points));
    } else {
      txt << metric << ": skipped (fewer than 3 positive medians)\n";
    }
  }
  if (slopes.empty())
    throw ValidationError("sweep-report: need >= 3 distinct n values");
  csv << "metric,slope,intercept,r2\n";
  for (const auto& [metric, fit] : slopes) {
    csv << metric << ',' << fmt(fit.slope) << ',' << fmt(fit.intercept) << ','
        << fmt(fit.r2) << '\n';
    txt << metric << ": slope=" << fmt(fit.slope) << " r2=" << fmt(fit.r2)
        << '\n';
  }
  if (!csv || !txt) throw IoError("write failure: sweep summary");
  return csv_path;
}

}  // namespace lqg
