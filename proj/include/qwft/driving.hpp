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

#include <string>
#include <variant>
#include <vector>

#include "qwft/states.hpp"

// Closed-system driving: propagator from a time-dependent Hamiltonian path,
// conditional work, the exponential work estimator with its free-energy
// bounds, and the two-point-measurement cross-check.

namespace qwft {

struct ConstantPath {
  HermitianOperator hamiltonian;
};

struct LinearPath {
  HermitianOperator start;
  HermitianOperator end;
};

// Piecewise-linear interpolation through (time, Hamiltonian) samples; the
// sample times must span the owning segment.
struct SampledPath {
  std::vector<double> times;
  std::vector<HermitianOperator> hamiltonians;
};

using HamiltonianPath = std::variant<ConstantPath, LinearPath, SampledPath>;

struct ProtocolSegment {
  double t_start;
  double t_end;
  HamiltonianPath path;
};

// Time-ordered Hamiltonian path H(t) on [0, duration]; segments must be
// contiguous and share one dimension.
class DrivingProtocol {
 public:
  DrivingProtocol(double duration, std::vector<ProtocolSegment> segments);

  double duration() const { return duration_; }
  Eigen::Index dim() const { return dim_; }
  const std::vector<ProtocolSegment>& segments() const { return segments_; }

  HermitianOperator hamiltonian_at(double t) const;
  HermitianOperator initial_hamiltonian() const { return hamiltonian_at(0.0); }
  HermitianOperator final_hamiltonian() const {
    return hamiltonian_at(duration_);
  }

 private:
  double duration_;
  Eigen::Index dim_;
  std::vector<ProtocolSegment> segments_;
};

struct ReportMeta {
  std::string scenario_id;
  std::uint64_t seed = 0;
  bool pruned_mass = false;
};

struct WorkOutcome {
  double probability;
  double work;
};

// Per-outcome conditional work plus the derived estimator and bounds:
//   average_work >= delta_f_tilde >= delta_f  (enforced on construction).
struct WorkReport {
  std::vector<WorkOutcome> outcomes;
  double average_work = 0.0;
  double estimator = 0.0;       // sum_i p_i exp(-beta <w>_i)
  double delta_f_tilde = 0.0;   // -ln(estimator)/beta
  double delta_f = 0.0;
  double gap_jensen = 0.0;      // average_work - delta_f_tilde
  double gap_quantum = 0.0;     // delta_f_tilde - delta_f
  double beta = 0.0;
  ReportMeta meta;
};

// Ordered product of exp(-i H(t_mid) dt) over midpoint-sampled steps;
// second-order convergent in dt.
UnitaryOperator propagator(const DrivingProtocol& protocol, int steps);
UnitaryOperator propagator(const DrivingProtocol& protocol, double t_begin,
                           double t_end, int steps);

// tr[rho (U^dag H_T U - H_0)].
double conditional_work(const DensityOperator& rho, const UnitaryOperator& u,
                        const HermitianOperator& h0,
                        const HermitianOperator& ht);

// -ln(Z_T / Z_0) / beta via shifted log partition functions.
double delta_f(const HermitianOperator& h0, const HermitianOperator& ht,
               double beta);

// Requires d.reference to equal gibbs_state(h0, beta) within 1e-9. The
// estimator is computed in the log domain (max-shifted) so large beta does
// not underflow. Throws InequalityViolation if a bound is broken.
WorkReport work_report(const Decomposition& d, const UnitaryOperator& u,
                       const HermitianOperator& h0, const HermitianOperator& ht,
                       double beta, ReportMeta meta = {});

// Two-point-measurement estimator; equals exp(-beta delta_f) identically for
// every unitary, which makes it a cross-oracle for the free energy route.
double tpm_estimator(const HermitianOperator& h0, const HermitianOperator& ht,
                     const UnitaryOperator& u, double beta);

// Shared assembly used by the closed and open report paths.
WorkReport assemble_work_report(const std::vector<WorkOutcome>& outcomes,
                                double beta, double delta_f_value,
                                ReportMeta meta);

}  // namespace qwft
