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

#include "qwft/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "qwft/report.hpp"

namespace qwft {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw InvalidInput(path + ": " + message);
}

const json& member(const json& node, const std::string& path,
                   const char* key) {
  if (!node.is_object()) fail(path, "expected an object");
  const auto it = node.find(key);
  if (it == node.end()) fail(path + "/" + key, "missing required field");
  return *it;
}

double number_at(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

int int_at(const json& node, const std::string& path) {
  if (!node.is_number_integer()) fail(path, "expected an integer");
  return node.get<int>();
}

std::uint64_t seed_at(const json& node, const std::string& path) {
  if (!node.is_number_unsigned() &&
      !(node.is_number_integer() && node.get<long long>() >= 0)) {
    fail(path, "expected an unsigned integer seed");
  }
  return node.get<std::uint64_t>();
}

std::string string_at(const json& node, const std::string& path) {
  if (!node.is_string()) fail(path, "expected a string");
  return node.get<std::string>();
}

Complex complex_at(const json& node, const std::string& path) {
  if (!node.is_array() || node.size() != 2 || !node[0].is_number() ||
      !node[1].is_number()) {
    fail(path, "expected a [re, im] pair");
  }
  return Complex(node[0].get<double>(), node[1].get<double>());
}

ComplexMatrix matrix_at(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) {
    fail(path, "expected a non-empty array of rows");
  }
  const std::size_t rows = node.size();
  const std::size_t cols = node[0].is_array() ? node[0].size() : 0;
  if (cols == 0) fail(path + "/0", "expected a non-empty row");
  ComplexMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = node[r];
    const std::string row_path = path + "/" + std::to_string(r);
    if (!row.is_array() || row.size() != cols) {
      fail(row_path, "rows must all have the same length");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(r, c) = complex_at(row[c], row_path + "/" + std::to_string(c));
    }
  }
  if (!all_finite(m)) fail(path, "matrix has non-finite entries");
  return m;
}

ComplexVector vector_at(const json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) {
    fail(path, "expected a non-empty array of [re, im] pairs");
  }
  ComplexVector v(node.size());
  for (std::size_t i = 0; i < node.size(); ++i) {
    v[i] = complex_at(node[i], path + "/" + std::to_string(i));
  }
  return v;
}

HermitianOperator hermitian_at(const json& node, const std::string& path) {
  try {
    return HermitianOperator(matrix_at(node, path));
  } catch (const InvalidInput& err) {
    fail(path, err.what());
  }
}

// A Hamiltonian reference is either a name into /hamiltonians or an inline
// matrix.
HermitianOperator resolve_hamiltonian(
    const json& node, const std::string& path,
    const std::map<std::string, HermitianOperator>& named) {
  if (node.is_string()) {
    const auto it = named.find(node.get<std::string>());
    if (it == named.end()) {
      fail(path, "unknown Hamiltonian name '" + node.get<std::string>() + "'");
    }
    return it->second;
  }
  return hermitian_at(node, path);
}

std::optional<DrivingProtocol> parse_protocol(
    const json& root, const std::map<std::string, HermitianOperator>& named,
    int* unitary_steps) {
  std::vector<ProtocolSegment> segments;
  double duration = 1.0;
  if (!root.contains("protocol")) {
    // Default: one linear ramp h0 -> ht over unit time; absent entirely for
    // meter-only scenarios.
    const auto h0 = named.find("h0");
    const auto ht = named.find("ht");
    if (h0 == named.end() || ht == named.end()) {
      return std::nullopt;
    }
    segments.push_back({0.0, 1.0, LinearPath{h0->second, ht->second}});
    return DrivingProtocol(duration, std::move(segments));
  }
  const json& proto = root["protocol"];
  const std::string path = "/protocol";
  duration = number_at(member(proto, path, "duration"), path + "/duration");
  if (proto.contains("steps")) {
    *unitary_steps = int_at(proto["steps"], path + "/steps");
    if (*unitary_steps < 1) fail(path + "/steps", "must be >= 1");
  }
  const json& segs = member(proto, path, "segments");
  if (!segs.is_array() || segs.empty()) {
    fail(path + "/segments", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const json& seg = segs[i];
    const std::string seg_path = path + "/segments/" + std::to_string(i);
    const double t0 =
        number_at(member(seg, seg_path, "t_start"), seg_path + "/t_start");
    const double t1 =
        number_at(member(seg, seg_path, "t_end"), seg_path + "/t_end");
    const std::string kind =
        string_at(member(seg, seg_path, "type"), seg_path + "/type");
    if (kind == "constant") {
      segments.push_back(
          {t0, t1,
           ConstantPath{resolve_hamiltonian(
               member(seg, seg_path, "hamiltonian"),
               seg_path + "/hamiltonian", named)}});
    } else if (kind == "linear") {
      segments.push_back(
          {t0, t1,
           LinearPath{resolve_hamiltonian(member(seg, seg_path, "from"),
                                          seg_path + "/from", named),
                      resolve_hamiltonian(member(seg, seg_path, "to"),
                                          seg_path + "/to", named)}});
    } else if (kind == "sampled") {
      const json& times = member(seg, seg_path, "times");
      const json& hams = member(seg, seg_path, "hamiltonians");
      if (!times.is_array() || !hams.is_array() ||
          times.size() != hams.size()) {
        fail(seg_path, "'times' and 'hamiltonians' must be arrays of equal "
                       "length");
      }
      SampledPath sampled;
      for (std::size_t k = 0; k < times.size(); ++k) {
        sampled.times.push_back(number_at(
            times[k], seg_path + "/times/" + std::to_string(k)));
        sampled.hamiltonians.push_back(resolve_hamiltonian(
            hams[k], seg_path + "/hamiltonians/" + std::to_string(k), named));
      }
      segments.push_back({t0, t1, std::move(sampled)});
    } else {
      fail(seg_path + "/type",
           "unknown segment type '" + kind +
               "' (expected constant | linear | sampled)");
    }
  }
  try {
    return DrivingProtocol(duration, std::move(segments));
  } catch (const InvalidInput& err) {
    fail(path, err.what());
  }
}

DecompositionSpec parse_decomposition(const json& root) {
  DecompositionSpec spec;
  if (!root.contains("decomposition")) return spec;  // default: trivial
  const json& node = root["decomposition"];
  const std::string path = "/decomposition";
  const std::string kind =
      string_at(member(node, path, "type"), path + "/type");
  if (kind == "trivial") {
    spec.kind = DecompositionSpec::Kind::Trivial;
  } else if (kind == "eigen") {
    spec.kind = DecompositionSpec::Kind::EigenBasis;
  } else if (kind == "povm_random") {
    spec.kind = DecompositionSpec::Kind::PovmRandom;
    spec.outcomes = int_at(member(node, path, "outcomes"), path + "/outcomes");
    if (spec.outcomes < 1) fail(path + "/outcomes", "must be >= 1");
    if (node.contains("seed")) {
      spec.seed = seed_at(node["seed"], path + "/seed");
    }
    if (node.contains("projective")) {
      if (!node["projective"].is_boolean()) {
        fail(path + "/projective", "expected a boolean");
      }
      spec.projective = node["projective"].get<bool>();
    }
  } else if (kind == "povm_explicit") {
    spec.kind = DecompositionSpec::Kind::PovmExplicit;
    const json& elements = member(node, path, "elements");
    if (!elements.is_array() || elements.empty()) {
      fail(path + "/elements", "expected a non-empty array of matrices");
    }
    for (std::size_t i = 0; i < elements.size(); ++i) {
      spec.elements.push_back(matrix_at(
          elements[i], path + "/elements/" + std::to_string(i)));
    }
  } else {
    fail(path + "/type", "unknown decomposition type '" + kind + "'");
  }
  return spec;
}

std::vector<DampingEventSpec> parse_damping(
    const json& root, const std::map<std::string, HermitianOperator>& named) {
  std::vector<DampingEventSpec> events;
  if (!root.contains("damping")) return events;
  const json& node = root["damping"];
  if (!node.is_array()) fail("/damping", "expected an array of events");
  for (std::size_t i = 0; i < node.size(); ++i) {
    const json& ev = node[i];
    const std::string path = "/damping/" + std::to_string(i);
    DampingEventSpec spec;
    spec.time = number_at(member(ev, path, "time"), path + "/time");
    if (ev.contains("hamiltonian")) {
      spec.hamiltonian = resolve_hamiltonian(ev["hamiltonian"],
                                             path + "/hamiltonian", named);
    }
    const json& ch = member(ev, path, "channel");
    const std::string ch_path = path + "/channel";
    const std::string kind =
        string_at(member(ch, ch_path, "type"), ch_path + "/type");
    if (kind == "mixture_reset") {
      spec.channel.kind = ChannelSpec::Kind::MixtureReset;
      spec.channel.mix =
          number_at(member(ch, ch_path, "lambda"), ch_path + "/lambda");
      if (!(spec.channel.mix >= 0.0 && spec.channel.mix <= 1.0)) {
        fail(ch_path + "/lambda", "must lie in [0, 1]");
      }
    } else if (kind == "thermal_attach") {
      spec.channel.kind = ChannelSpec::Kind::ThermalAttach;
      spec.channel.theta =
          number_at(member(ch, ch_path, "theta"), ch_path + "/theta");
    } else if (kind == "kraus") {
      spec.channel.kind = ChannelSpec::Kind::Kraus;
      const json& ops = member(ch, ch_path, "operators");
      if (!ops.is_array() || ops.empty()) {
        fail(ch_path + "/operators", "expected a non-empty array");
      }
      for (std::size_t k = 0; k < ops.size(); ++k) {
        spec.channel.kraus.push_back(matrix_at(
            ops[k], ch_path + "/operators/" + std::to_string(k)));
      }
    } else {
      fail(ch_path + "/type", "unknown channel type '" + kind + "'");
    }
    events.push_back(std::move(spec));
  }
  return events;
}

std::optional<MeterSpec> parse_meter(const json& root) {
  if (!root.contains("meter")) return std::nullopt;
  const json& node = root["meter"];
  const std::string path = "/meter";
  MeterSpec spec;
  spec.system_dim = int_at(member(node, path, "system_dim"),
                           path + "/system_dim");
  spec.meter_dim = int_at(member(node, path, "meter_dim"),
                          path + "/meter_dim");
  ComplexMatrix h_sm = matrix_at(member(node, path, "h_sm"), path + "/h_sm");
  try {
    spec.h_sm = HermitianOperator(std::move(h_sm));
  } catch (const InvalidInput& err) {
    fail(path + "/h_sm", err.what());
  }
  if (spec.h_sm.dim() != spec.system_dim * spec.meter_dim) {
    fail(path + "/h_sm", "dimension must equal system_dim * meter_dim");
  }
  if (node.contains("duration")) {
    spec.duration = number_at(node["duration"], path + "/duration");
  }
  if (node.contains("steps")) {
    spec.steps = int_at(node["steps"], path + "/steps");
  }
  if (node.contains("shots")) {
    spec.shots = int_at(node["shots"], path + "/shots");
  }
  if (node.contains("scan")) {
    const json& scan = node["scan"];
    if (!scan.is_array()) fail(path + "/scan", "expected an array");
    for (std::size_t i = 0; i < scan.size(); ++i) {
      spec.scan.push_back(
          int_at(scan[i], path + "/scan/" + std::to_string(i)));
    }
  }
  const json& p = member(node, path, "path");
  const std::string p_path = path + "/path";
  const std::string kind = string_at(member(p, p_path, "type"),
                                     p_path + "/type");
  if (kind == "generator") {
    GeneratorMeterPath gen{
        hermitian_at(member(p, p_path, "generator"), p_path + "/generator"),
        vector_at(member(p, p_path, "initial"), p_path + "/initial")};
    const double norm = gen.initial.norm();
    if (std::abs(norm - 1.0) > 1e-9) {
      fail(p_path + "/initial", "meter state must be normalized");
    }
    gen.initial /= norm;
    spec.path = std::move(gen);
  } else if (kind == "sampled") {
    const json& states = member(p, p_path, "states");
    if (!states.is_array() || states.size() < 2) {
      fail(p_path + "/states", "expected >= 2 states");
    }
    SampledMeterPath sampled;
    for (std::size_t i = 0; i < states.size(); ++i) {
      ComplexVector v = vector_at(
          states[i], p_path + "/states/" + std::to_string(i));
      const double norm = v.norm();
      if (std::abs(norm - 1.0) > 1e-9) {
        fail(p_path + "/states/" + std::to_string(i),
             "meter state must be normalized");
      }
      sampled.states.push_back(v / norm);
    }
    spec.path = std::move(sampled);
  } else {
    fail(p_path + "/type", "unknown meter path type '" + kind + "'");
  }
  if (node.contains("initial_state")) {
    spec.initial_state = matrix_at(node["initial_state"],
                                   path + "/initial_state");
  }
  return spec;
}

std::optional<OptimizeSpec> parse_optimize(const json& root) {
  if (!root.contains("optimize")) return std::nullopt;
  const json& node = root["optimize"];
  const std::string path = "/optimize";
  OptimizeSpec spec;
  if (node.contains("restarts")) {
    spec.restarts = int_at(node["restarts"], path + "/restarts");
  }
  if (node.contains("max_iters")) {
    spec.max_iters = int_at(node["max_iters"], path + "/max_iters");
  }
  if (node.contains("outcomes")) {
    spec.outcomes = int_at(node["outcomes"], path + "/outcomes");
  }
  if (node.contains("tol")) {
    spec.tol = number_at(node["tol"], path + "/tol");
  }
  return spec;
}

std::optional<SweepSpec> parse_sweep(const json& root) {
  if (!root.contains("sweep")) return std::nullopt;
  const json& node = root["sweep"];
  const std::string path = "/sweep";
  SweepSpec spec;
  spec.command = string_at(member(node, path, "command"), path + "/command");
  if (spec.command != "bound" && spec.command != "open-run" &&
      spec.command != "meter") {
    fail(path + "/command", "sweep supports bound | open-run | meter");
  }
  const json& axes = member(node, path, "axes");
  if (!axes.is_array() || axes.empty()) {
    fail(path + "/axes", "expected a non-empty array");
  }
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const json& axis = axes[i];
    const std::string a_path = path + "/axes/" + std::to_string(i);
    SweepAxis out;
    out.parameter = string_at(member(axis, a_path, "parameter"),
                              a_path + "/parameter");
    if (out.parameter != "beta" && out.parameter != "lambda" &&
        out.parameter != "steps" && out.parameter != "seed") {
      fail(a_path + "/parameter",
           "sweep supports beta | lambda | steps | seed");
    }
    const json& values = member(axis, a_path, "values");
    if (!values.is_array() || values.empty()) {
      fail(a_path + "/values", "expected a non-empty array");
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
      out.values.push_back(
          number_at(values[k], a_path + "/values/" + std::to_string(k)));
    }
    spec.axes.push_back(std::move(out));
  }
  return spec;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw InvalidInput(std::string("scenario JSON: ") + err.what());
  }
  if (!root.is_object()) throw InvalidInput("/: expected a JSON object");

  std::map<std::string, HermitianOperator> named;
  if (root.contains("hamiltonians")) {
    const json& hams = root["hamiltonians"];
    if (!hams.is_object()) fail("/hamiltonians", "expected an object");
    for (const auto& [name, value] : hams.items()) {
      named.emplace(name, hermitian_at(value, "/hamiltonians/" + name));
    }
  }

  int unitary_steps = 128;
  std::optional<DrivingProtocol> protocol =
      parse_protocol(root, named, &unitary_steps);
  std::vector<DampingEventSpec> damping = parse_damping(root, named);

  Scenario scenario{
      root.contains("version") ? string_at(root["version"], "/version") : "1",
      root.contains("id") ? string_at(root["id"], "/id") : "scenario",
      root.contains("beta") ? number_at(root["beta"], "/beta") : 1.0,
      std::move(named),
      std::move(protocol),
      unitary_steps,
      parse_decomposition(root),
      std::move(damping),
      parse_meter(root),
      parse_optimize(root),
      parse_sweep(root),
      root.contains("seed") ? seed_at(root["seed"], "/seed") : 0,
      digest_hex(canonical_json(root))};
  if (!(scenario.beta > 0.0) || !std::isfinite(scenario.beta)) {
    fail("/beta", "must be finite and > 0");
  }
  return scenario;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

const DrivingProtocol& require_protocol(const Scenario& scenario) {
  if (!scenario.protocol.has_value()) {
    throw InvalidInput("/protocol: required for this command (provide a "
                       "protocol block or 'h0'/'ht' Hamiltonians)");
  }
  return *scenario.protocol;
}

Decomposition build_decomposition(const Scenario& scenario,
                                  std::uint64_t seed_override) {
  const DensityOperator gibbs0 = gibbs_state(
      require_protocol(scenario).initial_hamiltonian(), scenario.beta);
  switch (scenario.decomposition.kind) {
    case DecompositionSpec::Kind::Trivial:
      return trivial_decomposition(gibbs0);
    case DecompositionSpec::Kind::EigenBasis:
      return eigenbasis_decomposition(gibbs0);
    case DecompositionSpec::Kind::PovmRandom: {
      const std::uint64_t seed = scenario.decomposition.seed != 0
                                     ? scenario.decomposition.seed
                                     : seed_override;
      return decompose_via_povm(
          purify(gibbs0),
          random_povm(gibbs0.dim(), scenario.decomposition.outcomes, seed,
                      scenario.decomposition.projective));
    }
    case DecompositionSpec::Kind::PovmExplicit:
      return decompose_via_povm(purify(gibbs0),
                                POVM(scenario.decomposition.elements));
  }
  throw InvalidInput("build_decomposition: unreachable");
}

QuantumChannel build_channel(const ChannelSpec& spec,
                             const HermitianOperator& h, double beta) {
  switch (spec.kind) {
    case ChannelSpec::Kind::MixtureReset:
      return mixture_reset_channel(h, beta, spec.mix);
    case ChannelSpec::Kind::ThermalAttach:
      return partial_swap_channel(h, beta, spec.theta);
    case ChannelSpec::Kind::Kraus:
      return QuantumChannel(spec.kraus);
  }
  throw InvalidInput("build_channel: unreachable");
}

DampingSchedule build_schedule(const Scenario& scenario) {
  const DrivingProtocol& protocol = require_protocol(scenario);
  std::vector<DampingEvent> events;
  for (const auto& spec : scenario.damping) {
    const HermitianOperator h =
        spec.hamiltonian.value_or(protocol.hamiltonian_at(spec.time));
    events.push_back(
        {spec.time, h, build_channel(spec.channel, h, scenario.beta)});
  }
  return DampingSchedule(protocol.duration(), std::move(events),
                         protocol.final_hamiltonian(), scenario.beta);
}

}  // namespace qwft
