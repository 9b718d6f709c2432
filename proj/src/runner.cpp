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

#include "qwft/runner.hpp"

#include <chrono>
#include <cmath>

#include "qwft/suites.hpp"
#include "qwft/version.hpp"

namespace qwft {

namespace {

using nlohmann::json;

json work_report_payload(const WorkReport& report) {
  json payload;
  payload["beta"] = report.beta;
  payload["W_avg"] = report.average_work;
  payload["estimator"] = report.estimator;
  payload["delta_F_tilde"] = report.delta_f_tilde;
  payload["delta_F"] = report.delta_f;
  payload["gap_jensen"] = report.gap_jensen;
  payload["gap_quantum"] = report.gap_quantum;
  payload["pruned_mass"] = report.meta.pruned_mass;
  json outcomes = json::array();
  for (const auto& o : report.outcomes) {
    json entry;
    entry["p"] = o.probability;
    entry["w"] = o.work;
    outcomes.push_back(entry);
  }
  payload["outcomes"] = outcomes;
  return payload;
}

std::vector<std::string> work_report_csv_row(const WorkReport& report,
                                             const std::string& scenario_id,
                                             std::uint64_t seed) {
  return {scenario_id,
          format_double(report.beta),
          format_double(report.average_work),
          format_double(report.delta_f_tilde),
          format_double(report.delta_f),
          format_double(report.estimator),
          format_double(report.gap_jensen),
          format_double(report.gap_quantum),
          std::to_string(seed)};
}

WorkReport run_bound(const Scenario& scenario, std::uint64_t seed) {
  const DrivingProtocol& protocol = require_protocol(scenario);
  const Decomposition decomposition = build_decomposition(scenario, seed);
  const UnitaryOperator u = propagator(protocol, scenario.unitary_steps);
  return work_report(decomposition, u, protocol.initial_hamiltonian(),
                     protocol.final_hamiltonian(), scenario.beta,
                     ReportMeta{scenario.id, seed, false});
}

WorkReport run_open(const Scenario& scenario, std::uint64_t seed) {
  const Decomposition decomposition = build_decomposition(scenario, seed);
  const DampingSchedule schedule = build_schedule(scenario);
  return open_work_report(decomposition, schedule, require_protocol(scenario),
                          scenario.unitary_steps,
                          ReportMeta{scenario.id, seed, false});
}

struct MeterOutput {
  json payload;
  std::vector<std::vector<std::string>> csv_rows;
};

MeterOutput run_meter(const Scenario& scenario, std::uint64_t seed) {
  if (!scenario.meter.has_value()) {
    throw InvalidInput("/meter: required for the meter command");
  }
  const MeterSpec& spec = *scenario.meter;
  const JointHamiltonian joint =
      make_joint_hamiltonian(spec.system_dim, spec.meter_dim, spec.h_sm);
  const MeterProtocol protocol(spec.meter_dim, spec.path, spec.duration,
                               spec.steps);
  const DensityOperator rho0 =
      spec.initial_state.has_value()
          ? DensityOperator(*spec.initial_state)
          : gibbs_state(effective_hamiltonian(joint, protocol.state_at(0.0)),
                        scenario.beta);
  std::vector<int> step_counts = spec.scan;
  if (step_counts.empty()) step_counts.push_back(spec.steps);
  const std::vector<ScanRow> rows =
      convergence_scan(rho0, joint, protocol, step_counts, spec.shots, seed);

  MeterOutput out;
  json rows_json = json::array();
  for (const auto& row : rows) {
    json r;
    r["steps"] = row.steps;
    r["dt"] = row.dt;
    r["total_work"] = row.total_work;
    r["reference_work"] = row.reference_work;
    r["error"] = row.error;
    r["variance"] = row.variance;
    r["sample_mean"] = row.sample_mean;
    r["sample_variance"] = row.sample_variance;
    rows_json.push_back(r);
    out.csv_rows.push_back({scenario.id, std::to_string(row.steps),
                            format_double(row.dt),
                            format_double(row.total_work),
                            format_double(row.reference_work),
                            format_double(row.error),
                            format_double(row.variance),
                            format_double(row.sample_mean),
                            format_double(row.sample_variance),
                            std::to_string(seed)});
  }
  out.payload["rows"] = rows_json;
  out.payload["shots"] = spec.shots;
  return out;
}

json optimize_payload(const OptimizationResult& result) {
  json payload;
  payload["best_delta_F_tilde"] = result.best_objective;
  payload["delta_F"] = result.delta_f;
  payload["certificate_gap"] = result.certificate_gap;
  payload["converged"] = result.converged;
  payload["evaluations"] = result.evaluations;
  payload["best_parameters"] = result.best_parameters;
  // The full best-so-far trace is long; keep a decimated version for plots.
  json trace = json::array();
  const std::size_t stride =
      std::max<std::size_t>(1, result.best_trace.size() / 256);
  for (std::size_t i = 0; i < result.best_trace.size(); i += stride) {
    trace.push_back(result.best_trace[i]);
  }
  if (!result.best_trace.empty()) trace.push_back(result.best_trace.back());
  payload["best_trace"] = trace;
  return payload;
}

// Applies one sweep-axis override to a scenario copy.
void apply_override(Scenario* scenario, const std::string& parameter,
                    double value) {
  if (parameter == "beta") {
    if (!(value > 0.0)) throw InvalidInput("sweep: beta must be > 0");
    scenario->beta = value;
  } else if (parameter == "lambda") {
    for (auto& event : scenario->damping) {
      if (event.channel.kind == ChannelSpec::Kind::MixtureReset) {
        event.channel.mix = value;
      }
    }
  } else if (parameter == "steps") {
    const int steps = static_cast<int>(std::llround(value));
    if (steps < 1) throw InvalidInput("sweep: steps must be >= 1");
    scenario->unitary_steps = steps;
    if (scenario->meter.has_value()) scenario->meter->steps = steps;
  } else if (parameter == "seed") {
    scenario->seed = static_cast<std::uint64_t>(std::llround(value));
  } else {
    throw InvalidInput("sweep: unsupported parameter '" + parameter + "'");
  }
}

}  // namespace

RunReport run_command(const Scenario* scenario, const std::string& command,
                      const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.command = command;
  report.tool_version = kVersion;
  if (scenario != nullptr) {
    report.scenario_id = scenario->id;
    report.input_digest = scenario->input_digest;
    report.seed = options.seed.value_or(scenario->seed);
  } else {
    report.scenario_id = "-";
    report.input_digest = "-";
    report.seed = options.seed.value_or(0);
  }

  if (command == "verify") {
    const double tol = options.tolerance.value_or(1e-9);
    const std::vector<SuiteResult> results = run_verification_suites(
        options.verify_probes, options.verify_dim, report.seed, tol,
        options.jobs);
    json suites = json::array();
    report.csv_header = {"suite", "probes", "violations", "worst_slack"};
    for (const auto& suite : results) {
      json s;
      s["name"] = suite.name;
      s["probes"] = suite.probes;
      s["violations"] = suite.violations;
      s["worst_slack"] = suite.worst_slack;
      if (!suite.detail.empty()) s["detail"] = suite.detail;
      suites.push_back(s);
      report.csv_rows.push_back({suite.name, std::to_string(suite.probes),
                                 std::to_string(suite.violations),
                                 format_double(suite.worst_slack)});
      report.inequality_violations += suite.violations;
    }
    report.payload["suites"] = suites;
    report.payload["probes_per_suite"] = options.verify_probes;
    report.payload["tolerance"] = tol;
  } else if (command == "bound" || command == "open-run") {
    if (scenario == nullptr) {
      throw InvalidInput(command + ": requires a scenario file");
    }
    const WorkReport work = command == "bound"
                                ? run_bound(*scenario, report.seed)
                                : run_open(*scenario, report.seed);
    report.payload = work_report_payload(work);
    report.csv_header = work_report_csv_header();
    report.csv_rows.push_back(
        work_report_csv_row(work, scenario->id, report.seed));
  } else if (command == "meter") {
    if (scenario == nullptr) {
      throw InvalidInput("meter: requires a scenario file");
    }
    MeterOutput out = run_meter(*scenario, report.seed);
    report.payload = std::move(out.payload);
    report.csv_header = {"scenario_id", "steps",    "dt",
                         "total_work",  "reference_work", "error",
                         "variance",    "sample_mean",    "sample_variance",
                         "seed"};
    report.csv_rows = std::move(out.csv_rows);
  } else if (command == "optimize") {
    if (scenario == nullptr) {
      throw InvalidInput("optimize: requires a scenario file");
    }
    OptimizationConfig config;
    if (scenario->optimize.has_value()) {
      config.restarts = scenario->optimize->restarts;
      config.max_iters = scenario->optimize->max_iters;
      config.povm_outcomes = scenario->optimize->outcomes;
      config.tol = scenario->optimize->tol;
    }
    config.seed = report.seed;
    config.jobs = options.jobs;
    const OptimizationResult result =
        minimize_bound(require_protocol(*scenario).initial_hamiltonian(),
                       require_protocol(*scenario).final_hamiltonian(),
                       scenario->beta, config);
    report.payload = optimize_payload(result);
    report.csv_header = {"scenario_id", "best_delta_F_tilde", "delta_F",
                         "certificate_gap", "evaluations", "seed"};
    report.csv_rows.push_back({scenario->id,
                               format_double(result.best_objective),
                               format_double(result.delta_f),
                               format_double(result.certificate_gap),
                               std::to_string(result.evaluations),
                               std::to_string(report.seed)});
  } else if (command == "sweep") {
    if (scenario == nullptr) {
      throw InvalidInput("sweep: requires a scenario file");
    }
    if (!scenario->sweep.has_value()) {
      throw InvalidInput("/sweep: required for the sweep command");
    }
    const SweepSpec& sweep = *scenario->sweep;
    // Cartesian grid over the axes, row order lexicographic by axis index.
    std::size_t grid_size = 1;
    for (const auto& axis : sweep.axes) grid_size *= axis.values.size();
    report.csv_header = sweep.command == "meter"
                            ? std::vector<std::string>{"scenario_id", "steps",
                                                       "dt", "total_work",
                                                       "reference_work",
                                                       "error", "variance",
                                                       "sample_mean",
                                                       "sample_variance",
                                                       "seed"}
                            : work_report_csv_header();
    std::vector<json> payloads(grid_size);
    std::vector<std::vector<std::vector<std::string>>> rows(grid_size);
    std::vector<int> violations(grid_size, 0);
    parallel_for_indexed(
        options.jobs, static_cast<int>(grid_size), [&](int index) {
          Scenario point = *scenario;
          std::size_t rest = static_cast<std::size_t>(index);
          json overrides;
          for (const auto& axis : sweep.axes) {
            const std::size_t k = rest % axis.values.size();
            rest /= axis.values.size();
            apply_override(&point, axis.parameter, axis.values[k]);
            overrides[axis.parameter] = axis.values[k];
          }
          point.id = scenario->id + "#" + std::to_string(index);
          const std::uint64_t point_seed =
              mix_seed(report.seed + static_cast<std::uint64_t>(index));
          try {
            if (sweep.command == "meter") {
              MeterOutput out = run_meter(point, point_seed);
              payloads[index] = std::move(out.payload);
              rows[index] = std::move(out.csv_rows);
            } else {
              const WorkReport work = sweep.command == "bound"
                                          ? run_bound(point, point_seed)
                                          : run_open(point, point_seed);
              payloads[index] = work_report_payload(work);
              rows[index].push_back(
                  work_report_csv_row(work, point.id, point_seed));
            }
            payloads[index]["overrides"] = overrides;
            payloads[index]["grid_index"] = index;
          } catch (const InequalityViolation&) {
            ++violations[index];
            payloads[index]["grid_index"] = index;
            payloads[index]["error"] = "inequality violation";
          }
        });
    json points = json::array();
    for (std::size_t i = 0; i < grid_size; ++i) {
      points.push_back(payloads[i]);
      for (auto& row : rows[i]) report.csv_rows.push_back(std::move(row));
      report.inequality_violations += violations[i];
    }
    report.payload["points"] = points;
    report.payload["command"] = sweep.command;
  } else {
    throw InvalidInput("unknown command '" + command +
                       "' (expected verify | bound | open-run | meter | "
                       "optimize | sweep)");
  }

  const auto end = std::chrono::steady_clock::now();
  report.wall_time_ms =
      std::chrono::duration<double, std::milli>(end - start).count();
  return report;
}

}  // namespace qwft
