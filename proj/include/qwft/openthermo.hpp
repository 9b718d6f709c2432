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

#include "qwft/driving.hpp"

// Open-system scenario: Gibbs-preserving damping channels interleaved with
// unitary driving, and the work bookkeeping across damping events. Damping
// events are instantaneous maps between propagator segments.

namespace qwft {

// Fixed-point residual accepted for a damping channel.
inline constexpr double kGibbsFixedPointTol = 1e-9;

// Completely positive trace-preserving map in Kraus form.
class QuantumChannel {
 public:
  explicit QuantumChannel(std::vector<ComplexMatrix> kraus_operators);

  Eigen::Index dim() const { return kraus_.front().rows(); }
  const std::vector<ComplexMatrix>& kraus_operators() const { return kraus_; }

 private:
  std::vector<ComplexMatrix> kraus_;
};

DensityOperator apply_channel(const QuantumChannel& channel,
                              const DensityOperator& rho);

QuantumChannel identity_channel(Eigen::Index dim);

// K[rho] = (1 - mix) rho + mix * gibbs(h, beta), in Kraus form: sqrt(1-mix) 1
// plus rank-1 resets sqrt(mix p_k) |k><j| over the Gibbs eigenbasis.
QuantumChannel mixture_reset_channel(const HermitianOperator& h, double beta,
                                     double mix);

// K[rho] = tr_anc[V (rho (x) gibbs(ancilla_h, beta)) V^dag]. The joint
// unitary must commute with h (x) 1 + 1 (x) ancilla_h, which makes the Gibbs
// state of h an exact fixed point; a detailed balance condition is not
// required. The fixed point is verified numerically before acceptance.
QuantumChannel thermal_attach_channel(const HermitianOperator& h, double beta,
                                      Eigen::Index ancilla_dim,
                                      const UnitaryOperator& joint_unitary,
                                      const HermitianOperator& ancilla_h);

// Convenience thermal attachment: V = exp(-i theta SWAP) with an ancilla
// copy of h. theta = pi/2 is a full swap (complete thermalization).
QuantumChannel partial_swap_channel(const HermitianOperator& h, double beta,
                                    double theta);

// Max-norm residual |K[gibbs(h, beta)] - gibbs(h, beta)|.
double verify_gibbs_fixed_point(const QuantumChannel& channel,
                                const HermitianOperator& h, double beta);

struct DampingEvent {
  double time;
  HermitianOperator hamiltonian;  // instantaneous driving Hamiltonian
  QuantumChannel channel;
};

// Ordered damping events on [0, duration] plus the final Hamiltonian at
// t = duration. Every channel must pass verify_gibbs_fixed_point against its
// event Hamiltonian: the fixed-point property is the theorem's hypothesis,
// so it is enforced here rather than trusted from construction.
class DampingSchedule {
 public:
  DampingSchedule(double duration, std::vector<DampingEvent> events,
                  HermitianOperator final_hamiltonian, double beta);

  double duration() const { return duration_; }
  double beta() const { return beta_; }
  const std::vector<DampingEvent>& events() const { return events_; }
  const HermitianOperator& final_hamiltonian() const { return final_h_; }

 private:
  double duration_;
  std::vector<DampingEvent> events_;
  HermitianOperator final_h_;
  double beta_;
};

// Work across the full schedule: sum of energy gains of the unitary strokes,
// read with the instantaneous Hamiltonians right before and right after each
// damping event. The schedule Hamiltonians must match the protocol at the
// event times (checked within 1e-9). An empty schedule reduces to the closed
// conditional_work on the same code path.
double open_conditional_work(const DensityOperator& rho,
                             const DampingSchedule& schedule,
                             const DrivingProtocol& protocol,
                             int propagator_steps);

WorkReport open_work_report(const Decomposition& d,
                            const DampingSchedule& schedule,
                            const DrivingProtocol& protocol,
                            int propagator_steps, ReportMeta meta = {});

}  // namespace qwft
