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

#ifndef LQGLEARN_HARNESS_HPP_
#define LQGLEARN_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lqg/system.hpp"

namespace lqg {

struct ExperimentConfig {
  std::string fixture_name = "fixture";
  RandomSystemSpec fixture;
  std::uint64_t fixture_seed = 1;

  double sigma_u = 1.0;
  Eigen::Index ell = 1;
  Eigen::Index m = 1;
  double theta = -1.0;  // < 0: automatic rule
  double c_theta = 0.5;
  std::vector<Eigen::Index> n_grid;
  std::vector<std::uint64_t> seeds;
  Eigen::Index n_mc = 4096;
  std::string out_dir = "out";

  bool run_corel = true;
  bool run_sysid = true;
  bool run_eval = true;
  bool run_e2e = true;

  static ExperimentConfig load(const std::string& path);
  void validate() const;
  LqgSystem make_system() const;
};

// Writes <out>/check_report.txt with assumption checks and measured
// constants (stability ratio, nu, mu^2, beta, the k-rule table).
std::string cmd_check(const ExperimentConfig& cfg);

// Writes one dataset file per (n, seed) plus a CSV interchange export of the
// smallest cell.
void cmd_collect(const ExperimentConfig& cfg);

// Collects and learns; persists representation, model, and controller blocks
// per (n, seed).
void cmd_learn(const ExperimentConfig& cfg);

// The full Algorithm-1 pipeline per (n, seed) cell, appending rows
// "fixture,n,seed,t,metric,value" to <out>/results.csv. Returns the results
// path. A failing cell records a `failed` row and the run continues.
std::string cmd_run(const ExperimentConfig& cfg);

// Alias of the pipeline that skips artifact persistence (evaluation only).
std::string cmd_evaluate(const ExperimentConfig& cfg);

// Reads a results file, medians errors over seeds per n, fits log-log rates
// per metric, and writes <out>/sweep_summary.{txt,csv}.
std::string cmd_sweep_report(const std::string& results_path,
                             const std::string& out_dir);

}  // namespace lqg

#endif  // LQGLEARN_HARNESS_HPP_
