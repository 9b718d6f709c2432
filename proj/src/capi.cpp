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

#include "qwft.h"

#include <string>

#include "qwft/runner.hpp"
#include "qwft/version.hpp"

struct qwft_scenario {
  qwft::Scenario value;
};

struct qwft_report {
  qwft::RunReport value;
  std::string json_text;
  std::string csv_text;
};

namespace {

thread_local std::string g_last_error;

qwft_status capture(const std::exception& err, qwft_status status) {
  g_last_error = err.what();
  return status;
}

template <typename Fn>
qwft_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const qwft::InequalityViolation& err) {
    return capture(err, QWFT_ERROR_INEQUALITY);
  } catch (const qwft::InvalidInput& err) {
    return capture(err, QWFT_ERROR_INVALID_INPUT);
  } catch (const std::exception& err) {
    return capture(err, QWFT_ERROR_INTERNAL);
  } catch (...) {
    g_last_error = "unknown error";
    return QWFT_ERROR_INTERNAL;
  }
}

}  // namespace

extern "C" {

void qwft_options_init(qwft_options* options) {
  if (options == nullptr) return;
  options->seed = 0;
  options->has_seed = 0;
  options->tolerance = 0.0;
  options->has_tolerance = 0;
  options->jobs = 1;
  options->verify_probes = 1000;
  options->verify_dim = 0;
}

const char* qwft_version(void) { return qwft::kVersion; }

const char* qwft_last_error(void) { return g_last_error.c_str(); }

qwft_status qwft_scenario_parse(const char* json_text, qwft_scenario** out) {
  if (out == nullptr) return QWFT_ERROR_INVALID_INPUT;
  *out = nullptr;
  if (json_text == nullptr) {
    g_last_error = "scenario text is NULL";
    return QWFT_ERROR_INVALID_INPUT;
  }
  return guarded([&] {
    *out = new qwft_scenario{qwft::parse_scenario(json_text)};
    return QWFT_OK;
  });
}

qwft_status qwft_scenario_load(const char* path, qwft_scenario** out) {
  if (out == nullptr) return QWFT_ERROR_INVALID_INPUT;
  *out = nullptr;
  if (path == nullptr) {
    g_last_error = "scenario path is NULL";
    return QWFT_ERROR_INVALID_INPUT;
  }
  return guarded([&] {
    *out = new qwft_scenario{qwft::load_scenario_file(path)};
    return QWFT_OK;
  });
}

void qwft_scenario_free(qwft_scenario* scenario) { delete scenario; }

qwft_status qwft_run(const qwft_scenario* scenario, const char* command,
                     const qwft_options* options, qwft_report** out) {
  if (out == nullptr) return QWFT_ERROR_INVALID_INPUT;
  *out = nullptr;
  if (command == nullptr) {
    g_last_error = "command is NULL";
    return QWFT_ERROR_INVALID_INPUT;
  }
  qwft_options defaults;
  qwft_options_init(&defaults);
  const qwft_options& opts = options != nullptr ? *options : defaults;

  qwft::RunOptions run_options;
  if (opts.has_seed) run_options.seed = opts.seed;
  if (opts.has_tolerance) run_options.tolerance = opts.tolerance;
  run_options.jobs = opts.jobs;
  run_options.verify_probes = opts.verify_probes;
  run_options.verify_dim = opts.verify_dim;

  return guarded([&]() -> qwft_status {
    qwft::RunReport report = qwft::run_command(
        scenario != nullptr ? &scenario->value : nullptr, command,
        run_options);
    auto* handle = new qwft_report{std::move(report), "", ""};
    handle->json_text = qwft::emit_report_json(handle->value);
    handle->csv_text = qwft::emit_report_csv(handle->value);
    *out = handle;
    if (handle->value.inequality_violations > 0) {
      g_last_error = "verification found inequality violations";
      return QWFT_ERROR_INEQUALITY;
    }
    return QWFT_OK;
  });
}

const char* qwft_report_json(const qwft_report* report) {
  return report != nullptr ? report->json_text.c_str() : "";
}

const char* qwft_report_csv(const qwft_report* report) {
  return report != nullptr ? report->csv_text.c_str() : "";
}

double qwft_report_wall_time_ms(const qwft_report* report) {
  return report != nullptr ? report->value.wall_time_ms : 0.0;
}

void qwft_report_free(qwft_report* report) { delete report; }

}  // extern "C"
