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

#include <cmath>

#include "doctest.h"

#include "qwft/runner.hpp"
#include "test_helpers.hpp"

using namespace qwft;
using namespace qwft::test;

namespace {

const char* kScenarioDir = QWFT_SCENARIO_DIR;

std::string scenario_path(const char* name) {
  return std::string(kScenarioDir) + "/" + name;
}

}  // namespace

TEST_CASE("parse_scenario: shipped scenarios load and validate") {
  const Scenario closed = load_scenario_file(scenario_path("closed_qubit.json"));
  CHECK(closed.id == "closed_qubit");
  CHECK(closed.beta == 1.0);
  CHECK(closed.protocol.has_value());
  CHECK(closed.protocol->dim() == 2);
  CHECK(closed.decomposition.kind == DecompositionSpec::Kind::EigenBasis);
  CHECK(closed.sweep.has_value());

  const Scenario open = load_scenario_file(scenario_path("open_qubit.json"));
  CHECK(open.damping.size() == 2);
  CHECK(open.damping[0].channel.kind == ChannelSpec::Kind::MixtureReset);
  CHECK(open.damping[1].channel.kind == ChannelSpec::Kind::ThermalAttach);

  const Scenario meter = load_scenario_file(scenario_path("meter_qubit.json"));
  REQUIRE(meter.meter.has_value());
  CHECK(meter.meter->scan.size() == 4);
  CHECK_FALSE(meter.protocol.has_value());
}

TEST_CASE("parse_scenario: field-precise validation errors") {
  // Non-Hermitian Hamiltonian: the error names the offending field.
  const std::string bad_h0 = R"({
    "id": "bad", "beta": 1.0,
    "hamiltonians": {
      "h0": [[[1, 0], [1, 0]], [[0, 0], [-1, 0]]],
      "ht": [[[2, 0], [0, 0]], [[0, 0], [-2, 0]]]
    }
  })";
  CHECK_THROWS_WITH_AS(parse_scenario(bad_h0),
                       doctest::Contains("/hamiltonians/h0"), InvalidInput);

  CHECK_THROWS_WITH_AS(parse_scenario("{\"beta\": []}"),
                       doctest::Contains("/beta"), InvalidInput);

  const std::string bad_entry = R"({
    "id": "bad",
    "hamiltonians": { "h0": [[[1, 0], [0]], [[0, 0], [-1, 0]]] }
  })";
  CHECK_THROWS_WITH_AS(parse_scenario(bad_entry),
                       doctest::Contains("/hamiltonians/h0"), InvalidInput);

  // Syntax errors carry the parser position.
  CHECK_THROWS_AS(parse_scenario("{ not json"), InvalidInput);

  // Unknown segment Hamiltonian name.
  const std::string bad_name = R"({
    "hamiltonians": { "h0": [[[1,0],[0,0]],[[0,0],[-1,0]]],
                      "ht": [[[1,0],[0,0]],[[0,0],[-1,0]]] },
    "protocol": { "duration": 1.0, "segments": [
      { "t_start": 0, "t_end": 1, "type": "constant", "hamiltonian": "nope" }
    ]}
  })";
  CHECK_THROWS_WITH_AS(parse_scenario(bad_name), doctest::Contains("nope"),
                       InvalidInput);
}

TEST_CASE("canonical_json: sorted keys, fixed floats, idempotent") {
  nlohmann::json j;
  j["zeta"] = 0.1;
  j["alpha"] = 1;  // stays an integer
  j["mid"] = nlohmann::json::array({1.5, -2.25e-7, 3});
  j["name"] = "line\nbreak";
  const std::string first = canonical_json(j);
  CHECK(first ==
        "{\"alpha\":1,\"mid\":[1.5,-2.2499999999999999e-07,3],"
        "\"name\":\"line\\nbreak\",\"zeta\":0.10000000000000001}");
  // Round trip: parse and re-render reproduces the same bytes.
  CHECK(canonical_json(nlohmann::json::parse(first)) == first);
}

TEST_CASE("format_double: lossless 17-significant-digit rendering") {
  Rng rng(161);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::exp(rng.uniform(-30.0, 30.0)) *
                     (rng.uniform() < 0.5 ? -1.0 : 1.0);
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("run_command: bound on the closed qubit scenario") {
  const Scenario scenario =
      load_scenario_file(scenario_path("closed_qubit.json"));
  const RunReport report = run_command(&scenario, "bound", {});
  const double z_ratio = std::cosh(2.0) / std::cosh(1.0);
  CHECK(report.payload["estimator"].get<double>() ==
        doctest::Approx(z_ratio).epsilon(1e-10));
  CHECK(report.payload["delta_F"].get<double>() ==
        doctest::Approx(-std::log(z_ratio)).epsilon(1e-10));
  CHECK(report.csv_header == work_report_csv_header());
  REQUIRE(report.csv_rows.size() == 1);
  CHECK(report.csv_rows[0][0] == "closed_qubit");

  // CSV header text is pinned.
  const std::string csv = emit_report_csv(report);
  CHECK(csv.rfind("scenario_id,beta,W_avg,delta_F_tilde,delta_F,estimator,"
                  "gap_jensen,gap_quantum,seed\n",
                  0) == 0);
}

TEST_CASE("run_command: deterministic byte-identical reports") {
  const Scenario scenario =
      load_scenario_file(scenario_path("open_qubit.json"));
  const RunReport a = run_command(&scenario, "open-run", {});
  const RunReport b = run_command(&scenario, "open-run", {});
  CHECK(emit_report_json(a) == emit_report_json(b));
  CHECK(emit_report_csv(a) == emit_report_csv(b));

  // Seed override changes the digest-relevant content deterministically.
  RunOptions seeded;
  seeded.seed = 777;
  const RunReport c = run_command(&scenario, "bound", seeded);
  const RunReport d = run_command(&scenario, "bound", seeded);
  CHECK(emit_report_json(c) == emit_report_json(d));
}

TEST_CASE("run_command: sweep emits ordered grid rows") {
  const Scenario scenario =
      load_scenario_file(scenario_path("open_qubit.json"));
  RunOptions options;
  options.jobs = 3;
  const RunReport report = run_command(&scenario, "sweep", options);
  REQUIRE(report.csv_rows.size() == 5);  // lambda axis
  for (std::size_t i = 0; i < report.csv_rows.size(); ++i) {
    CHECK(report.csv_rows[i][0] ==
          "open_qubit#" + std::to_string(i));
  }
  // Parallel and serial execution agree byte-for-byte.
  RunOptions serial;
  serial.jobs = 1;
  const RunReport again = run_command(&scenario, "sweep", serial);
  CHECK(emit_report_json(report) == emit_report_json(again));
}

TEST_CASE("run_command: verify summarises the randomized suites") {
  RunOptions options;
  options.verify_probes = 40;
  options.jobs = 2;
  const RunReport report = run_command(nullptr, "verify", options);
  CHECK(report.inequality_violations == 0);
  REQUIRE(report.payload.contains("suites"));
  CHECK(report.payload["suites"].size() == 7);

  CHECK_THROWS_AS(run_command(nullptr, "bound", {}), InvalidInput);
  CHECK_THROWS_AS(run_command(nullptr, "nonsense", {}), InvalidInput);
}

TEST_CASE("run_command: meter scan payload") {
  const Scenario scenario =
      load_scenario_file(scenario_path("meter_qubit.json"));
  Scenario fast = scenario;
  fast.meter->scan = {20, 40};
  fast.meter->shots = 50;
  const RunReport report = run_command(&fast, "meter", {});
  REQUIRE(report.payload["rows"].size() == 2);
  CHECK(report.payload["rows"][0]["steps"] == 20);
  CHECK(report.payload["rows"][1]["error"].get<double>() <
        report.payload["rows"][0]["error"].get<double>());
}

TEST_CASE("input digest is stable across formatting differences") {
  const std::string compact =
      R"({"beta":1.0,"hamiltonians":{"h0":[[[1,0],[0,0]],[[0,0],[-1,0]]],"ht":[[[2,0],[0,0]],[[0,0],[-2,0]]]},"id":"x"})";
  const std::string spaced = R"({
    "id": "x",
    "beta": 1.0,
    "hamiltonians": {
      "ht": [[[2, 0], [0, 0]], [[0, 0], [-2, 0]]],
      "h0": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]
    }
  })";
  CHECK(parse_scenario(compact).input_digest ==
        parse_scenario(spaced).input_digest);
}
