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

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lqg/errors.hpp"
#include "lqg/harness.hpp"

namespace {

struct CommonOpts {
  std::string config;
  std::string out;
  std::int64_t seed = -1;
};

lqg::ExperimentConfig load_with_overrides(const CommonOpts& opts) {
  lqg::ExperimentConfig cfg = lqg::ExperimentConfig::load(opts.config);
  if (!opts.out.empty()) cfg.out_dir = opts.out;
  if (opts.seed >= 0) cfg.seeds = {static_cast<std::uint64_t>(opts.seed)};
  return cfg;
}

void add_common(CLI::App* sub, CommonOpts& opts, bool config_required = true) {
  auto* c = sub->add_option("--config", opts.config, "experiment config (JSON)");
  if (config_required) c->required();
  sub->add_option("--out", opts.out, "output directory override");
  sub->add_option("--seed", opts.seed, "replace the config's seed list");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"direct latent model learning for LTV LQG control"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string results_path;

  auto* check = app.add_subcommand("check", "verify fixture assumptions");
  add_common(check, opts);
  auto* collect = app.add_subcommand("collect", "collect and persist datasets");
  add_common(collect, opts);
  auto* learn = app.add_subcommand("learn", "run CoReL + SysId, save artifacts");
  add_common(learn, opts);
  auto* evaluate = app.add_subcommand("evaluate", "evaluate against ground truth");
  add_common(evaluate, opts);
  auto* run = app.add_subcommand("run", "full pipeline over the (n, seed) grid");
  add_common(run, opts);
  auto* sweep = app.add_subcommand("sweep-report", "fit rates from a results file");
  sweep->add_option("--results", results_path, "results.csv from `run`")->required();
  sweep->add_option("--out", opts.out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      std::cout << lqg::cmd_check(load_with_overrides(opts)) << "\n";
    } else if (collect->parsed()) {
      lqg::cmd_collect(load_with_overrides(opts));
    } else if (learn->parsed()) {
      lqg::cmd_learn(load_with_overrides(opts));
    } else if (evaluate->parsed()) {
      std::cout << lqg::cmd_evaluate(load_with_overrides(opts)) << "\n";
    } else if (run->parsed()) {
      std::cout << lqg::cmd_run(load_with_overrides(opts)) << "\n";
    } else if (sweep->parsed()) {
      std::cout << lqg::cmd_sweep_report(results_path, opts.out) << "\n";
    }
  } catch (const lqg::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return lqg::ValidationError::kExitCode;
  } catch (const lqg::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return lqg::NumericalError::kExitCode;
  } catch (const lqg::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return lqg::IoError::kExitCode;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lqg::NumericalError::kExitCode;
  }
  return 0;
}
