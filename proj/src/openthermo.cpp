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

#include "qwft/openthermo.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace qwft {

namespace {

ComplexMatrix apply_kraus(const std::vector<ComplexMatrix>& kraus,
                          const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& k : kraus) {
    out += k * rho * k.adjoint();
  }
  return out;
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus_operators) {
  if (kraus_operators.empty()) {
    throw InvalidInput("QuantumChannel: needs at least one Kraus operator");
  }
  const Eigen::Index d = kraus_operators.front().rows();
  ComplexMatrix completeness = ComplexMatrix::Zero(d, d);
  for (const auto& k : kraus_operators) {
    if (k.rows() != d || k.cols() != d) {
      throw InvalidInput("QuantumChannel: Kraus operators must be square with "
                         "one shared dimension");
    }
    if (!all_finite(k)) {
      throw InvalidInput("QuantumChannel: non-finite Kraus entries");
    }
    completeness += k.adjoint() * k;
  }
  const double defect = max_abs(completeness - identity_matrix(d));
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "QuantumChannel: trace preservation defect " << defect;
    throw InvalidInput(os.str());
  }
  kraus_ = std::move(kraus_operators);
}

DensityOperator apply_channel(const QuantumChannel& channel,
                              const DensityOperator& rho) {
  if (channel.dim() != rho.dim()) {
    throw InvalidInput("apply_channel: dimension mismatch");
  }
  return DensityOperator(apply_kraus(channel.kraus_operators(), rho.matrix()));
}

QuantumChannel identity_channel(Eigen::Index dim) {
  return QuantumChannel({identity_matrix(dim)});
}

QuantumChannel mixture_reset_channel(const HermitianOperator& h, double beta,
                                     double mix) {
  if (!(mix >= 0.0 && mix <= 1.0)) {
    throw InvalidInput("mixture_reset_channel: mix must lie in [0, 1]");
  }
  const Eigen::Index d = h.dim();
  std::vector<ComplexMatrix> kraus;
  if (mix < 1.0) {
    kraus.push_back(std::sqrt(1.0 - mix) * identity_matrix(d));
  }
  if (mix > 0.0) {
    const EigenSystem es =
        eig_hermitian(HermitianOperator(gibbs_state(h, beta).matrix()));
    for (Eigen::Index k = 0; k < d; ++k) {
      const double p = std::max(es.eigenvalues[k], 0.0);
      const ComplexVector target = es.eigenvectors.col(k);
      for (Eigen::Index j = 0; j < d; ++j) {
        const ComplexVector source = es.eigenvectors.col(j);
        kraus.push_back(std::sqrt(mix * p) * target * source.adjoint());
      }
    }
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel thermal_attach_channel(const HermitianOperator& h, double beta,
                                      Eigen::Index ancilla_dim,
                                      const UnitaryOperator& joint_unitary,
                                      const HermitianOperator& ancilla_h) {
  const Eigen::Index d = h.dim();
  if (ancilla_h.dim() != ancilla_dim ||
      joint_unitary.dim() != d * ancilla_dim) {
    throw InvalidInput("thermal_attach_channel: dimension mismatch");
  }
  const ComplexMatrix total_energy =
      kron(h.matrix(), identity_matrix(ancilla_dim)) +
      kron(identity_matrix(d), ancilla_h.matrix());
  const ComplexMatrix defect = joint_unitary.matrix() * total_energy -
                               total_energy * joint_unitary.matrix();
  const double tol = 1e-10 * std::max(1.0, max_abs(total_energy));
  if (max_abs(defect) > tol) {
    std::ostringstream os;
    os << "thermal_attach_channel: joint unitary does not commute with the "
       << "total energy (defect " << max_abs(defect) << ")";
    throw InvalidInput(os.str());
  }

  const EigenSystem ancilla = eig_hermitian(
      HermitianOperator(gibbs_state(ancilla_h, beta).matrix()));
  // K_{j,a} = sqrt(q_a) (1 (x) <j|) V (1 (x) |a>), in the ancilla Gibbs
  // eigenbasis.
  const ComplexMatrix basis_change =
      kron(identity_matrix(d), ancilla.eigenvectors);
  const ComplexMatrix v = joint_unitary.matrix() * basis_change;
  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index j = 0; j < ancilla_dim; ++j) {
    for (Eigen::Index a = 0; a < ancilla_dim; ++a) {
      const double q = std::max(ancilla.eigenvalues[a], 0.0);
      ComplexMatrix k(d, d);
      for (Eigen::Index s_out = 0; s_out < d; ++s_out) {
        for (Eigen::Index s_in = 0; s_in < d; ++s_in) {
          k(s_out, s_in) =
              v(s_out * ancilla_dim + j, s_in * ancilla_dim + a);
        }
      }
      kraus.push_back(std::sqrt(q) * k);
    }
  }
  QuantumChannel channel(std::move(kraus));
  const double residual = verify_gibbs_fixed_point(channel, h, beta);
  if (residual > kGibbsFixedPointTol) {
    std::ostringstream os;
    os << "thermal_attach_channel: Gibbs fixed-point residual " << residual;
    throw InvalidInput(os.str());
  }
  return channel;
}

QuantumChannel partial_swap_channel(const HermitianOperator& h, double beta,
                                    double theta) {
  const Eigen::Index d = h.dim();
  ComplexMatrix swap = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index x = 0; x < d; ++x) {
    for (Eigen::Index y = 0; y < d; ++y) {
      swap(y * d + x, x * d + y) = 1.0;
    }
  }
  const UnitaryOperator v(unitary_exp(HermitianOperator(swap), theta));
  return thermal_attach_channel(h, beta, d, v, h);
}

double verify_gibbs_fixed_point(const QuantumChannel& channel,
                                const HermitianOperator& h, double beta) {
  const DensityOperator gibbs = gibbs_state(h, beta);
  const ComplexMatrix image =
      apply_kraus(channel.kraus_operators(), gibbs.matrix());
  return max_abs(image - gibbs.matrix());
}

DampingSchedule::DampingSchedule(double duration,
                                 std::vector<DampingEvent> events,
                                 HermitianOperator final_hamiltonian,
                                 double beta)
    : duration_(duration),
      events_(std::move(events)),
      final_h_(std::move(final_hamiltonian)),
      beta_(beta) {
  if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
    throw InvalidInput("DampingSchedule: duration must be positive");
  }
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
    throw InvalidInput("DampingSchedule: beta must be finite and > 0");
  }
  double cursor = -1.0;
  for (std::size_t n = 0; n < events_.size(); ++n) {
    const auto& event = events_[n];
    if (event.time < 0.0 || event.time > duration_ || event.time <= cursor) {
      std::ostringstream os;
      os << "DampingSchedule: event " << n
         << " times must be strictly increasing within [0, " << duration_
         << "]";
      throw InvalidInput(os.str());
    }
    if (event.channel.dim() != final_h_.dim() ||
        event.hamiltonian.dim() != final_h_.dim()) {
      throw InvalidInput("DampingSchedule: event dimension mismatch");
    }
    const double residual =
        verify_gibbs_fixed_point(event.channel, event.hamiltonian, beta_);
    if (residual > kGibbsFixedPointTol) {
      std::ostringstream os;
      os << "DampingSchedule: event " << n << " channel is not Gibbs-"
         << "preserving for its Hamiltonian (residual " << residual << ")";
      throw InvalidInput(os.str());
    }
    cursor = event.time;
  }
}

namespace {

constexpr double kScheduleMatchTol = 1e-9;

void check_schedule_consistency(const DampingSchedule& schedule,
                                const DrivingProtocol& protocol) {
  if (std::abs(schedule.duration() - protocol.duration()) > 1e-12) {
    throw PreconditionError(
        "open work: schedule and protocol durations differ");
  }
  if (schedule.final_hamiltonian().dim() != protocol.dim()) {
    throw PreconditionError("open work: dimension mismatch");
  }
  for (std::size_t n = 0; n < schedule.events().size(); ++n) {
    const auto& event = schedule.events()[n];
    const double defect = max_abs(
        event.hamiltonian.matrix() -
        protocol.hamiltonian_at(event.time).matrix());
    if (defect > kScheduleMatchTol) {
      std::ostringstream os;
      os << "open work: event " << n << " Hamiltonian deviates from the "
         << "instantaneous driving Hamiltonian by " << defect;
      throw PreconditionError(os.str());
    }
  }
  const double final_defect = max_abs(
      schedule.final_hamiltonian().matrix() -
      protocol.final_hamiltonian().matrix());
  if (final_defect > kScheduleMatchTol) {
    throw PreconditionError(
        "open work: schedule final Hamiltonian deviates from the protocol");
  }
}

int segment_steps(int total_steps, double t0, double t1, double duration) {
  const double fraction = (t1 - t0) / duration;
  return std::max(1, static_cast<int>(std::llround(total_steps * fraction)));
}

}  // namespace

double open_conditional_work(const DensityOperator& rho,
                             const DampingSchedule& schedule,
                             const DrivingProtocol& protocol,
                             int propagator_steps) {
  if (schedule.events().empty()) {
    // Reduction to the closed case, same code path as `work_report`.
    return conditional_work(rho, propagator(protocol, propagator_steps),
                            protocol.initial_hamiltonian(),
                            protocol.final_hamiltonian());
  }
  check_schedule_consistency(schedule, protocol);

  ComplexMatrix state = rho.matrix();
  double t_prev = 0.0;
  double work = 0.0;
  // Energy right after the previous damping (initially: the initial state
  // read with H_0).
  double energy_after_prev = checked_real(
      (state * protocol.initial_hamiltonian().matrix()).trace(),
      max_abs(protocol.initial_hamiltonian().matrix()));
  for (const auto& event : schedule.events()) {
    const UnitaryOperator u =
        propagator(protocol, t_prev, event.time,
                   segment_steps(propagator_steps, t_prev, event.time,
                                 protocol.duration()));
    state = u.matrix() * state * u.matrix().adjoint();
    const double energy_before = checked_real(
        (state * event.hamiltonian.matrix()).trace(),
        max_abs(event.hamiltonian.matrix()));
    work += energy_before - energy_after_prev;
    state = apply_channel(event.channel, DensityOperator(state)).matrix();
    energy_after_prev = checked_real(
        (state * event.hamiltonian.matrix()).trace(),
        max_abs(event.hamiltonian.matrix()));
    t_prev = event.time;
  }
  const UnitaryOperator u =
      propagator(protocol, t_prev, protocol.duration(),
                 segment_steps(propagator_steps, t_prev, protocol.duration(),
                               protocol.duration()));
  state = u.matrix() * state * u.matrix().adjoint();
  const double energy_final = checked_real(
      (state * schedule.final_hamiltonian().matrix()).trace(),
      max_abs(schedule.final_hamiltonian().matrix()));
  return work + energy_final - energy_after_prev;
}

WorkReport open_work_report(const Decomposition& d,
                            const DampingSchedule& schedule,
                            const DrivingProtocol& protocol,
                            int propagator_steps, ReportMeta meta) {
  if (schedule.events().empty()) {
    return work_report(d, propagator(protocol, propagator_steps),
                       protocol.initial_hamiltonian(),
                       protocol.final_hamiltonian(), schedule.beta(),
                       std::move(meta));
  }
  validate_decomposition(d);
  check_schedule_consistency(schedule, protocol);
  const HermitianOperator h0 = protocol.initial_hamiltonian();
  const DensityOperator gibbs0 = gibbs_state(h0, schedule.beta());
  const double reference_defect =
      max_abs(d.reference.matrix() - gibbs0.matrix());
  if (reference_defect > 1e-9) {
    std::ostringstream os;
    os << "open_work_report: decomposition reference deviates from the Gibbs "
       << "state of H_0 by " << reference_defect;
    throw PreconditionError(os.str());
  }
  std::vector<WorkOutcome> outcomes;
  outcomes.reserve(d.entries.size());
  for (const auto& entry : d.entries) {
    outcomes.push_back({entry.probability,
                        open_conditional_work(entry.state, schedule, protocol,
                                              propagator_steps)});
  }
  meta.pruned_mass = meta.pruned_mass || d.pruned;
  const double df =
      delta_f(h0, schedule.final_hamiltonian(), schedule.beta());
  return assemble_work_report(outcomes, schedule.beta(), df, std::move(meta));
}

}  // namespace qwft
