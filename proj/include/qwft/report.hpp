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

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

// Report emission. JSON output is canonical: sorted keys, floats rendered
// with 17 significant digits (lossless round trip), no locale dependence.
// Identical scenario + seed therefore produce byte-identical reports; wall
// time is tracked on the side and never enters the canonical bytes.

namespace qwft {

struct RunReport {
  std::string command;
  std::string scenario_id;
  std::string tool_version;
  std::string input_digest;
  std::uint64_t seed = 0;
  nlohmann::json payload;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  double wall_time_ms = 0.0;  // reporting only; excluded from serialization
  int inequality_violations = 0;
};

// Shortest fixed-format rendering: %.17g.
std::string format_double(double value);

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

// Compact canonical rendering of a JSON tree (sorted keys, fixed floats).
std::string canonical_json(const nlohmann::json& value);

std::string emit_report_json(const RunReport& report);
std::string emit_report_csv(const RunReport& report);

// Standard work-report CSV columns (bound, open-run, sweep).
const std::vector<std::string>& work_report_csv_header();

}  // namespace qwft
