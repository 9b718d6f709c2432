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

#include <map>
#include <optional>
#include <string>

#include "qwft/meter.hpp"
#include "qwft/openthermo.hpp"
#include "qwft/optimize.hpp"

// Scenario files: versioned JSON describing a run. Complex matrices are
// nested arrays of [re, im] pairs; parsing either produces validated domain
// objects or fails with a field-precise error (JSON-pointer style paths).

namespace qwft {

struct DecompositionSpec {
  enum class Kind { Trivial, EigenBasis, PovmRandom, PovmExplicit };
  Kind kind = Kind::Trivial;
  int outcomes = 1;           // PovmRandom
  std::uint64_t seed = 0;     // PovmRandom
  bool projective = false;    // PovmRandom
  std::vector<ComplexMatrix> elements;  // PovmExplicit
};

struct ChannelSpec {
  enum class Kind { MixtureReset, ThermalAttach, Kraus };
  Kind kind = Kind::MixtureReset;
  double mix = 1.0;                     // MixtureReset
  double theta = 0.0;                   // ThermalAttach (partial swap angle)
  std::vector<ComplexMatrix> kraus;     // Kraus
};

struct DampingEventSpec {
  double time = 0.0;
  // Defaults to the protocol Hamiltonian at the event time when absent.
  std::optional<HermitianOperator> hamiltonian;
  ChannelSpec channel;
};

struct MeterSpec {
  Eigen::Index system_dim = 0;
  Eigen::Index meter_dim = 0;
  HermitianOperator h_sm;
  MeterPath path;
  double duration = 1.0;
  int steps = 100;
  int shots = 0;
  std::vector<int> scan;  // step counts; empty means single run at `steps`
  std::optional<ComplexMatrix> initial_state;  // default: effective Gibbs
};

struct OptimizeSpec {
  int restarts = 8;
  int max_iters = 4000;
  int outcomes = 2;
  double tol = 1e-8;
};

struct SweepAxis {
  std::string parameter;  // "beta" | "lambda" | "steps" | "seed"
  std::vector<double> values;
};

struct SweepSpec {
  std::string command;  // "bound" | "open-run" | "meter"
  std::vector<SweepAxis> axes;
};

struct Scenario {
  std::string version;
  std::string id;
  double beta = 1.0;
  std::map<std::string, HermitianOperator> hamiltonians;
  // Absent only for meter-only scenarios.
  std::optional<DrivingProtocol> protocol;
  int unitary_steps = 128;
  DecompositionSpec decomposition;
  std::vector<DampingEventSpec> damping;
  std::optional<MeterSpec> meter;
  std::optional<OptimizeSpec> optimize;
  std::optional<SweepSpec> sweep;
  std::uint64_t seed = 0;
  std::string input_digest;  // content hash of the canonicalized input
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

// The protocol, or a field-precise error when the scenario lacks one.
const DrivingProtocol& require_protocol(const Scenario& scenario);

// Domain objects derived from the specs (shared by runner and tests).
Decomposition build_decomposition(const Scenario& scenario,
                                  std::uint64_t seed_override);
DampingSchedule build_schedule(const Scenario& scenario);
QuantumChannel build_channel(const ChannelSpec& spec,
                             const HermitianOperator& h, double beta);

}  // namespace qwft
