// Copyright 2026 The qwft authors
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

// Command-line front end. Talks to the core exclusively through the C API
// in qwft.h; exit codes: 0 success, 1 inequality violation (bug signal),
// 2 invalid input, 3 internal error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "qwft.h"

namespace {

struct CommonFlags {
  std::string scenario_path;
  std::string out_path;
  std::string format = "json";
  bool has_seed = false;
  std::uint64_t seed = 0;
  bool has_tol = false;
  double tol = 0.0;
  int jobs = 1;
  bool timings = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags, bool needs_scenario) {
  if (needs_scenario) {
    cmd->add_option("scenario", flags->scenario_path, "scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
  }
  cmd->add_option("--seed", flags->seed, "override the scenario seed")
      ->each([flags](const std::string&) { flags->has_seed = true; });
  cmd->add_option("--out", flags->out_path, "write the report to this path");
  cmd->add_option("--format", flags->format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--tol", flags->tol, "relative slack for verification")
      ->each([flags](const std::string&) { flags->has_tol = true; });
  cmd->add_option("--jobs", flags->jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--timings", flags->timings, "print wall time to stderr");
}

int run(const std::string& command, const CommonFlags& flags,
        int verify_probes, int verify_dim) {
  qwft_scenario* scenario = nullptr;
  if (!flags.scenario_path.empty()) {
    const qwft_status status =
        qwft_scenario_load(flags.scenario_path.c_str(), &scenario);
    if (status != QWFT_OK) {
      std::cerr << "error: " << qwft_last_error() << "\n";
      return static_cast<int>(status);
    }
  }

  qwft_options options;
  qwft_options_init(&options);
  options.has_seed = flags.has_seed ? 1 : 0;
  options.seed = flags.seed;
  options.has_tolerance = flags.has_tol ? 1 : 0;
  options.tolerance = flags.tol;
  options.jobs = flags.jobs;
  options.verify_probes = verify_probes;
  options.verify_dim = verify_dim;

  qwft_report* report = nullptr;
  const qwft_status status =
      qwft_run(scenario, command.c_str(), &options, &report);
  qwft_scenario_free(scenario);
  if (report == nullptr) {
    std::cerr << "error: " << qwft_last_error() << "\n";
    return static_cast<int>(status);
  }
  if (status == QWFT_ERROR_INEQUALITY) {
    std::cerr << "error: " << qwft_last_error() << "\n";
  }

  const std::string text =
      flags.format == "csv" ? qwft_report_csv(report) : qwft_report_json(report);
  if (flags.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(flags.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << flags.out_path << "\n";
      qwft_report_free(report);
      return 2;
    }
    out << text;
  }
  if (flags.timings) {
    std::fprintf(stderr, "wall_time_ms=%.3f\n",
                 qwft_report_wall_time_ms(report));
  }
  qwft_report_free(report);
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operational quantum work fluctuation bounds"};
  app.set_version_flag("--version", qwft_version());
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd;
    CommonFlags flags;
  };

  Sub verify{app.add_subcommand(
                 "verify", "run the randomized inequality verification suites"),
             {}};
  int verify_probes = 1000;
  int verify_dim = 0;
  verify.cmd->add_option("--seeds", verify_probes,
                         "probes per randomized suite");
  verify.cmd->add_option("--dim", verify_dim,
                         "fixed Hilbert-space dimension (0 mixes 2..4)");
  verify.cmd->add_option("scenario", verify.flags.scenario_path,
                         "optional scenario JSON (unused by the suites)")
      ->check(CLI::ExistingFile);
  add_common_flags(verify.cmd, &verify.flags, false);

  Sub bound{app.add_subcommand("bound",
                               "closed-system work bounds for a scenario"),
            {}};
  add_common_flags(bound.cmd, &bound.flags, true);

  Sub open_run{app.add_subcommand(
                   "open-run", "open-system work bounds with damping events"),
               {}};
  add_common_flags(open_run.cmd, &open_run.flags, true);

  Sub meter{app.add_subcommand(
                "meter", "stroboscopic meter convergence and variance tables"),
            {}};
  add_common_flags(meter.cmd, &meter.flags, true);

  Sub optimize{app.add_subcommand(
                   "optimize", "minimize the operational bound toward delta F"),
               {}};
  add_common_flags(optimize.cmd, &optimize.flags, true);

  Sub sweep{app.add_subcommand("sweep",
                               "evaluate a declared parameter grid (CSV rows)"),
            {}};
  add_common_flags(sweep.cmd, &sweep.flags, true);

  CLI11_PARSE(app, argc, argv);

  if (verify.cmd->parsed()) return run("verify", verify.flags, verify_probes,
                                       verify_dim);
  if (bound.cmd->parsed()) return run("bound", bound.flags, 0, 0);
  if (open_run.cmd->parsed()) return run("open-run", open_run.flags, 0, 0);
  if (meter.cmd->parsed()) return run("meter", meter.flags, 0, 0);
  if (optimize.cmd->parsed()) return run("optimize", optimize.flags, 0, 0);
  if (sweep.cmd->parsed()) return run("sweep", sweep.flags, 0, 0);
  return 2;
}
