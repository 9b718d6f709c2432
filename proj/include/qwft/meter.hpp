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
#include <variant>
#include <vector>

#include "qwft/states.hpp"

// Stroboscopic meter simulation: a pure-state protocol |mu_t> on an auxiliary
// meter implements an effective Hamiltonian <mu_t|H_SM|mu_t> on the system,
// and reads out per-step work through the observable Omega_n = -i[dM_n, M_n].
//
// The joint step is simulated EXACTLY (full matrix exponential of H_SM), so
// the first-order algebra behind the scheme becomes a testable convergence
// claim instead of an assumption.

namespace qwft {

// |mu_t> = exp(-i G t) |mu_0>; the projector derivative is analytic.
struct GeneratorMeterPath {
  HermitianOperator generator;
  ComplexVector initial;
};

// Uniformly sampled states on [0, duration], interpolated linearly and
// renormalized; derivatives fall back to finite differences.
struct SampledMeterPath {
  std::vector<ComplexVector> states;
};

using MeterPath = std::variant<GeneratorMeterPath, SampledMeterPath>;

class MeterProtocol {
 public:
  MeterProtocol(Eigen::Index meter_dim, MeterPath path, double duration,
                int step_count);

  Eigen::Index meter_dim() const { return meter_dim_; }
  double duration() const { return duration_; }
  int step_count() const { return step_count_; }
  const MeterPath& path() const { return path_; }
  bool has_analytic_derivative() const {
    return std::holds_alternative<GeneratorMeterPath>(path_);
  }

  ComplexVector state_at(double t) const;

  MeterProtocol with_step_count(int step_count) const {
    return MeterProtocol(meter_dim_, path_, duration_, step_count);
  }

 private:
  Eigen::Index meter_dim_;
  MeterPath path_;
  double duration_;
  int step_count_;
};

struct JointHamiltonian {
  Eigen::Index system_dim;
  Eigen::Index meter_dim;
  HermitianOperator hamiltonian;  // on system (x) meter
};

JointHamiltonian make_joint_hamiltonian(Eigen::Index system_dim,
                                        Eigen::Index meter_dim,
                                        HermitianOperator h);

struct ProjectorPair {
  HermitianOperator projector;   // M_n = |mu><mu|
  HermitianOperator derivative;  // dM_n/dt
  bool one_sided = false;        // endpoint finite difference was one-sided
};

// M_n and its time derivative at t = n * dt. Analytic when the path provides
// a derivative, otherwise central finite differences with step dt/16.
ProjectorPair projector_and_derivative(const MeterProtocol& mp, int n,
                                       double dt);

// <mu| H_SM |mu> contracted over the meter factor.
HermitianOperator effective_hamiltonian(const JointHamiltonian& h_sm,
                                        const ComplexVector& mu);

// Omega_n = -i [dM_n, M_n]; Hermitian and traceless.
HermitianOperator work_observable(const MeterProtocol& mp, int n, double dt);

struct MeterRunRecord {
  int step_count = 0;
  double dt = 0.0;
  std::vector<double> step_work;              // <Omega_n> per step
  std::vector<DensityOperator> system_states; // exact rho_0 .. rho_N
  double total_work = 0.0;                    // sum of <Omega_n>
  double reference_work = 0.0;                // <w> from the effective dynamics
  double error = 0.0;                         // |total_work - reference_work|
  double total_variance = 0.0;                // sum of per-step Born variances
  int shots = 0;
  std::uint64_t seed = 0;
  double sample_mean = 0.0;
  double sample_variance = 0.0;
  // Raw per-step outcomes (step-major, one entry per shot); filled only on
  // request since it is shots x steps doubles.
  std::vector<std::vector<double>> step_samples;
};

// Evolves rho (x) M_n exactly with exp(-i H_SM dt) each step, records the
// exact <Omega_n> from the post-interaction meter state, and compares the
// summed work against the effective-Hamiltonian propagator reference.
MeterRunRecord stroboscopic_run(const DensityOperator& rho0,
                                const JointHamiltonian& h_sm,
                                const MeterProtocol& mp);

// Monte Carlo outcome statistics. The system is propagated by the
// unconditional (averaged) map each step and meter outcomes are sampled
// marginally per step, so the summed outcome is an unbiased estimator of the
// exact total; back-action of reading the meter on the system is a
// higher-order effect covered by the convergence tests.
MeterRunRecord sample_run(const DensityOperator& rho0,
                          const JointHamiltonian& h_sm, const MeterProtocol& mp,
                          int shots, std::uint64_t seed,
                          bool keep_samples = false);

struct ScanRow {
  int steps = 0;
  double dt = 0.0;
  double total_work = 0.0;
  double reference_work = 0.0;
  double error = 0.0;
  double variance = 0.0;        // exact total variance
  double sample_mean = 0.0;
  double sample_variance = 0.0;
};

// Runs stroboscopic_run (and sample_run when shots > 0) for each step count.
std::vector<ScanRow> convergence_scan(const DensityOperator& rho0,
                                      const JointHamiltonian& h_sm,
                                      const MeterProtocol& mp,
                                      const std::vector<int>& step_counts,
                                      int shots, std::uint64_t seed);

}  // namespace qwft
