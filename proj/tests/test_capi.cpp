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

// Exercises the shared-library C API the way an external consumer would:
// opaque handles, status codes, thread-local error strings.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <string>

#include "qwft.h"

namespace {

const char* kScenarioDir = QWFT_SCENARIO_DIR;

std::string scenario_path(const char* name) {
  return std::string(kScenarioDir) + "/" + name;
}

}  // namespace

TEST_CASE("version and error strings are always available") {
  CHECK(qwft_version() != nullptr);
  CHECK(std::strlen(qwft_version()) > 0);
  CHECK(qwft_last_error() != nullptr);
}

TEST_CASE("scenario parsing: status codes and error messages") {
  qwft_scenario* scenario = nullptr;
  CHECK(qwft_scenario_parse("{ not json", &scenario) ==
        QWFT_ERROR_INVALID_INPUT);
  CHECK(scenario == nullptr);
  CHECK(std::strlen(qwft_last_error()) > 0);

  // Non-Hermitian Hamiltonian: invalid input with a field path.
  const char* bad =
      "{\"hamiltonians\":{\"h0\":[[[1,0],[1,0]],[[0,0],[-1,0]]]}}";
  CHECK(qwft_scenario_parse(bad, &scenario) == QWFT_ERROR_INVALID_INPUT);
  CHECK(std::string(qwft_last_error()).find("/hamiltonians/h0") !=
        std::string::npos);

  CHECK(qwft_scenario_load("/nonexistent/path.json", &scenario) ==
        QWFT_ERROR_INVALID_INPUT);

  CHECK(qwft_scenario_load(scenario_path("closed_qubit.json").c_str(),
                           &scenario) == QWFT_OK);
  REQUIRE(scenario != nullptr);
  qwft_scenario_free(scenario);
}

TEST_CASE("run: bound report and byte-identical reruns") {
  qwft_scenario* scenario = nullptr;
  REQUIRE(qwft_scenario_load(scenario_path("closed_qubit.json").c_str(),
                             &scenario) == QWFT_OK);

  qwft_options options;
  qwft_options_init(&options);

  qwft_report* first = nullptr;
  REQUIRE(qwft_run(scenario, "bound", &options, &first) == QWFT_OK);
  REQUIRE(first != nullptr);
  const std::string json_a = qwft_report_json(first);
  const std::string csv_a = qwft_report_csv(first);
  CHECK(json_a.find("\"estimator\":2.43810") != std::string::npos);
  CHECK(csv_a.rfind("scenario_id,beta,", 0) == 0);
  CHECK(qwft_report_wall_time_ms(first) >= 0.0);
  // Wall time never enters the canonical bytes.
  CHECK(json_a.find("wall_time") == std::string::npos);

  qwft_report* second = nullptr;
  REQUIRE(qwft_run(scenario, "bound", &options, &second) == QWFT_OK);
  CHECK(json_a == qwft_report_json(second));
  CHECK(csv_a == qwft_report_csv(second));

  qwft_report_free(first);
  qwft_report_free(second);
  qwft_scenario_free(scenario);
}

TEST_CASE("run: command validation and NULL handling") {
  qwft_report* report = nullptr;
  CHECK(qwft_run(nullptr, "bound", nullptr, &report) ==
        QWFT_ERROR_INVALID_INPUT);
  CHECK(report == nullptr);
  CHECK(qwft_run(nullptr, "nonsense", nullptr, &report) ==
        QWFT_ERROR_INVALID_INPUT);
  CHECK(qwft_run(nullptr, nullptr, nullptr, &report) ==
        QWFT_ERROR_INVALID_INPUT);
}

TEST_CASE("run: verify without a scenario") {
  qwft_options options;
  qwft_options_init(&options);
  options.verify_probes = 25;
  options.jobs = 2;
  qwft_report* report = nullptr;
  REQUIRE(qwft_run(nullptr, "verify", &options, &report) == QWFT_OK);
  REQUIRE(report != nullptr);
  const std::string json = qwft_report_json(report);
  CHECK(json.find("\"suites\"") != std::string::npos);
  CHECK(json.find("\"violations\":0") != std::string::npos);
  qwft_report_free(report);
}

TEST_CASE("run: open-run and meter through the C surface") {
  qwft_scenario* open_scenario = nullptr;
  REQUIRE(qwft_scenario_load(scenario_path("open_qubit.json").c_str(),
                             &open_scenario) == QWFT_OK);
  qwft_report* open_report = nullptr;
  REQUIRE(qwft_run(open_scenario, "open-run", nullptr, &open_report) ==
          QWFT_OK);
  CHECK(std::string(qwft_report_json(open_report)).find("gap_quantum") !=
        std::string::npos);
  qwft_report_free(open_report);
  qwft_scenario_free(open_scenario);

  // Meter run, trimmed down for test speed via the seed option only.
  qwft_scenario* meter_scenario = nullptr;
  const char* meter_json =
      "{\"id\":\"m\",\"beta\":1.0,\"meter\":{\"system_dim\":2,"
      "\"meter_dim\":2,"
      "\"h_sm\":[[[1,0],[0.25,0],[0.5,0],[0,0]],[[0.25,0],[-1,0],[0,0],"
      "[0.5,0]],[[0.5,0],[0,0],[-1,0],[0.25,0]],[[0,0],[0.5,0],[0.25,0],"
      "[1,0]]],"
      "\"path\":{\"type\":\"generator\",\"generator\":[[[0,0],[0,-1.57]],"
      "[[0,1.57],[0,0]]],\"initial\":[[1,0],[0,0]]},"
      "\"steps\":24,\"shots\":32,\"scan\":[12,24]}}";
  REQUIRE(qwft_scenario_parse(meter_json, &meter_scenario) == QWFT_OK);
  qwft_report* meter_report = nullptr;
  REQUIRE(qwft_run(meter_scenario, "meter", nullptr, &meter_report) ==
          QWFT_OK);
  const std::string csv = qwft_report_csv(meter_report);
  CHECK(csv.rfind("scenario_id,steps,dt,", 0) == 0);
  qwft_report_free(meter_report);
  qwft_scenario_free(meter_scenario);
}
