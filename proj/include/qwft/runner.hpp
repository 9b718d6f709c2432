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

#pragma once

#include <optional>

#include "qwft/report.hpp"
#include "qwft/scenario.hpp"

namespace qwft {

struct RunOptions {
  std::optional<std::uint64_t> seed;   // overrides the scenario seed
  std::optional<double> tolerance;     // relative slack for verify suites
  int jobs = 1;
  int verify_probes = 1000;            // probes per randomized suite
  Eigen::Index verify_dim = 0;         // 0 = mix dims 2..4
};

// Commands: verify | bound | open-run | meter | optimize | sweep.
// `verify` runs without a scenario. A report with
// inequality_violations > 0 signals a mathematical bug (CLI exit code 1).
RunReport run_command(const Scenario* scenario, const std::string& command,
                      const RunOptions& options);

}  // namespace qwft
