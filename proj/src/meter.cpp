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

#include "qwft/meter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qwft/driving.hpp"

namespace qwft {

MeterProtocol::MeterProtocol(Eigen::Index meter_dim, MeterPath path,
                             double duration, int step_count)
    : meter_dim_(meter_dim),
      path_(std::move(path)),
      duration_(duration),
      step_count_(step_count) {
  if (meter_dim_ < 2) {
    throw InvalidInput("MeterProtocol: meter dimension must be >= 2");
  }
  if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
    throw InvalidInput("MeterProtocol: duration must be positive");
  }
  if (step_count_ < 1) {
    throw InvalidInput("MeterProtocol: step count must be >= 1");
  }
  if (const auto* gen = std::get_if<GeneratorMeterPath>(&path_)) {
    if (gen->generator.dim() != meter_dim_ ||
        gen->initial.size() != meter_dim_) {
      throw InvalidInput("MeterProtocol: generator path dimension mismatch");
    }
    if (std::abs(gen->initial.norm() - 1.0) > 1e-12) {
      throw InvalidInput("MeterProtocol: initial meter state not normalized");
    }
  } else {
    const auto& sampled = std::get<SampledMeterPath>(path_);
    if (sampled.states.size() < 2) {
      throw InvalidInput("MeterProtocol: sampled path needs >= 2 states");
    }
    for (const auto& s : sampled.states) {
      if (s.size() != meter_dim_) {
        throw InvalidInput("MeterProtocol: sampled state dimension mismatch");
      }
      if (std::abs(s.norm() - 1.0) > 1e-12) {
        throw InvalidInput("MeterProtocol: sampled state not normalized");
      }
    }
  }
}

ComplexVector MeterProtocol::state_at(double t) const {
  if (const auto* gen = std::get_if<GeneratorMeterPath>(&path_)) {
    return unitary_exp(gen->generator, t) * gen->initial;
  }
  const auto& states = std::get<SampledMeterPath>(path_).states;
  const double clamped = std::clamp(t, 0.0, duration_);
  const double grid = clamped / duration_ *
                      static_cast<double>(states.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(grid));
  if (lo + 1 >= states.size()) return states.back();
  const double x = grid - static_cast<double>(lo);
  ComplexVector out = (1.0 - x) * states[lo] + x * states[lo + 1];
  return out / out.norm();
}

JointHamiltonian make_joint_hamiltonian(Eigen::Index system_dim,
                                        Eigen::Index meter_dim,
                                        HermitianOperator h) {
  if (h.dim() != system_dim * meter_dim) {
    std::ostringstream os;
    os << "JointHamiltonian: matrix dimension " << h.dim()
       << " is not system_dim * meter_dim = " << system_dim * meter_dim;
    throw InvalidInput(os.str());
  }
  return JointHamiltonian{system_dim, meter_dim, std::move(h)};
}

ProjectorPair projector_and_derivative(const MeterProtocol& mp, int n,
                                       double dt) {
  if (n < 0 || n > mp.step_count()) {
    throw InvalidInput("projector_and_derivative: step index out of range");
  }
  const double t = n * dt;
  const ComplexVector mu = mp.state_at(t);
  ComplexMatrix projector = mu * mu.adjoint();

  if (const auto* gen = std::get_if<GeneratorMeterPath>(&mp.path())) {
    // d/dt |mu><mu| = -i [G, M] for |mu_t> = exp(-i G t)|mu_0>.
    const ComplexMatrix comm =
        gen->generator.matrix() * projector - projector * gen->generator.matrix();
    return ProjectorPair{HermitianOperator(std::move(projector)),
                         HermitianOperator(Complex(0.0, -1.0) * comm), false};
  }

  const double h = dt / 16.0;
  bool one_sided = false;
  double t_lo = t - h;
  double t_hi = t + h;
  if (t_lo < 0.0) {
    t_lo = t;
    one_sided = true;
  }
  if (t_hi > mp.duration()) {
    t_hi = t;
    one_sided = true;
  }
  const ComplexVector mu_lo = mp.state_at(t_lo);
  const ComplexVector mu_hi = mp.state_at(t_hi);
  const ComplexMatrix m_lo = mu_lo * mu_lo.adjoint();
  const ComplexMatrix m_hi = mu_hi * mu_hi.adjoint();
  ComplexMatrix derivative = (m_hi - m_lo) / (t_hi - t_lo);
  return ProjectorPair{HermitianOperator(std::move(projector)),
                       HermitianOperator(std::move(derivative)), one_sided};
}

HermitianOperator effective_hamiltonian(const JointHamiltonian& h_sm,
                                        const ComplexVector& mu) {
  if (mu.size() != h_sm.meter_dim) {
    throw InvalidInput("effective_hamiltonian: meter state dimension mismatch");
  }
  const Eigen::Index ds = h_sm.system_dim;
  const Eigen::Index dm = h_sm.meter_dim;
  const ComplexMatrix& h = h_sm.hamiltonian.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(ds, ds);
  for (Eigen::Index s = 0; s < ds; ++s) {
    for (Eigen::Index t = 0; t < ds; ++t) {
      Complex sum = 0.0;
      for (Eigen::Index m = 0; m < dm; ++m) {
        for (Eigen::Index m2 = 0; m2 < dm; ++m2) {
          sum += std::conj(mu[m]) * h(s * dm + m, t * dm + m2) * mu[m2];
        }
      }
      out(s, t) = sum;
    }
  }
  return HermitianOperator(std::move(out));
}

HermitianOperator work_observable(const MeterProtocol& mp, int n, double dt) {
  const ProjectorPair pair = projector_and_derivative(mp, n, dt);
  const ComplexMatrix omega =
      Complex(0.0, -1.0) * (pair.derivative.matrix() * pair.projector.matrix() -
                            pair.projector.matrix() * pair.derivative.matrix());
  return HermitianOperator(omega);
}

namespace {

// Converged effective-Hamiltonian propagator; resolution well beyond the
// stroboscopic step count so the reference error is negligible in scans.
double effective_reference_work(const DensityOperator& rho0,
                                const JointHamiltonian& h_sm,
                                const MeterProtocol& mp) {
  const int steps = std::max(4096, 8 * mp.step_count());
  const double dt = mp.duration() / steps;
  ComplexMatrix u = identity_matrix(h_sm.system_dim);
  for (int k = 0; k < steps; ++k) {
    const double t_mid = (k + 0.5) * dt;
    const HermitianOperator h_eff =
        effective_hamiltonian(h_sm, mp.state_at(t_mid));
    u = unitary_exp(h_eff, dt) * u;
  }
  const HermitianOperator h0 = effective_hamiltonian(h_sm, mp.state_at(0.0));
  const HermitianOperator ht =
      effective_hamiltonian(h_sm, mp.state_at(mp.duration()));
  return conditional_work(rho0, UnitaryOperator(std::move(u)), h0, ht);
}

}  // namespace

MeterRunRecord stroboscopic_run(const DensityOperator& rho0,
                                const JointHamiltonian& h_sm,
                                const MeterProtocol& mp) {
  if (rho0.dim() != h_sm.system_dim || mp.meter_dim() != h_sm.meter_dim) {
    throw InvalidInput("stroboscopic_run: dimension mismatch");
  }
  const int n_steps = mp.step_count();
  const double dt = mp.duration() / n_steps;
  const ComplexMatrix x = unitary_exp(h_sm.hamiltonian, dt);

  MeterRunRecord record;
  record.step_count = n_steps;
  record.dt = dt;
  record.system_states.reserve(n_steps + 1);
  record.system_states.push_back(rho0);

  ComplexMatrix rho = rho0.matrix();
  double total = 0.0;
  double variance = 0.0;
  for (int n = 0; n < n_steps; ++n) {
    const ProjectorPair pair = projector_and_derivative(mp, n, dt);
    const ComplexMatrix joint =
        x * kron(rho, pair.projector.matrix()) * x.adjoint();
    const ComplexMatrix chi =
        partial_trace(joint, h_sm.system_dim, h_sm.meter_dim, Keep::Environment);
    rho = partial_trace(joint, h_sm.system_dim, h_sm.meter_dim, Keep::System);
    // Symmetrize away rounding noise before revalidating.
    rho = 0.5 * (rho + rho.adjoint().eval());
    record.system_states.push_back(DensityOperator(rho));

    const HermitianOperator omega = work_observable(mp, n, dt);
    const double scale = std::max(1.0, max_abs(omega.matrix()));
    const double mean = checked_real((omega.matrix() * chi).trace(), scale);
    const double second = checked_real(
        (omega.matrix() * omega.matrix() * chi).trace(), scale * scale);
    record.step_work.push_back(mean);
    total += mean;
    variance += std::max(second - mean * mean, 0.0);
  }
  record.total_work = total;
  record.total_variance = variance;
  record.reference_work = effective_reference_work(rho0, h_sm, mp);
  record.error = std::abs(record.total_work - record.reference_work);
  return record;
}

MeterRunRecord sample_run(const DensityOperator& rho0,
                          const JointHamiltonian& h_sm, const MeterProtocol& mp,
                          int shots, std::uint64_t seed, bool keep_samples) {
  if (shots < 1) throw InvalidInput("sample_run: shots must be >= 1");
  MeterRunRecord record = stroboscopic_run(rho0, h_sm, mp);
  record.shots = shots;
  record.seed = seed;

  // Per-step outcome distributions from the exact post-interaction meter
  // state; recomputed from the recorded exact trajectory.
  const int n_steps = record.step_count;
  const double dt = record.dt;
  const ComplexMatrix x = unitary_exp(h_sm.hamiltonian, dt);
  std::vector<std::vector<double>> values(n_steps);
  std::vector<std::vector<double>> cumulative(n_steps);
  for (int n = 0; n < n_steps; ++n) {
    const ProjectorPair pair = projector_and_derivative(mp, n, dt);
    const ComplexMatrix joint =
        x * kron(record.system_states[n].matrix(), pair.projector.matrix()) *
        x.adjoint();
    const ComplexMatrix chi =
        partial_trace(joint, h_sm.system_dim, h_sm.meter_dim, Keep::Environment);
    const EigenSystem es = eig_hermitian(work_observable(mp, n, dt));
    double mass = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
      const ComplexVector v = es.eigenvectors.col(k);
      const double p = std::max((v.adjoint() * chi * v).value().real(), 0.0);
      values[n].push_back(es.eigenvalues[k]);
      mass += p;
      cumulative[n].push_back(mass);
    }
    for (double& c : cumulative[n]) c /= mass;
  }

  Rng base(seed);
  if (keep_samples) {
    record.step_samples.assign(n_steps, std::vector<double>());
    for (auto& column : record.step_samples) column.reserve(shots);
  }
  double mean = 0.0;
  double m2 = 0.0;
  for (int shot = 0; shot < shots; ++shot) {
    Rng rng = base.fork(static_cast<std::uint64_t>(shot));
    double total = 0.0;
    for (int n = 0; n < n_steps; ++n) {
      const double r = rng.uniform();
      const auto it = std::upper_bound(cumulative[n].begin(),
                                       cumulative[n].end(), r);
      std::size_t k = static_cast<std::size_t>(it - cumulative[n].begin());
      if (k >= values[n].size()) k = values[n].size() - 1;
      total += values[n][k];
      if (keep_samples) record.step_samples[n].push_back(values[n][k]);
    }
    // Welford accumulation of the totals.
    const double delta = total - mean;
    mean += delta / (shot + 1);
    m2 += delta * (total - mean);
  }
  record.sample_mean = mean;
  record.sample_variance = (shots > 1) ? m2 / (shots - 1) : 0.0;
  return record;
}

std::vector<ScanRow> convergence_scan(const DensityOperator& rho0,
                                      const JointHamiltonian& h_sm,
                                      const MeterProtocol& mp,
                                      const std::vector<int>& step_counts,
                                      int shots, std::uint64_t seed) {
  if (step_counts.empty()) {
    throw InvalidInput("convergence_scan: empty step-count list");
  }
  std::vector<ScanRow> rows;
  for (std::size_t i = 0; i < step_counts.size(); ++i) {
    const MeterProtocol scaled = mp.with_step_count(step_counts[i]);
    const MeterRunRecord record =
        (shots > 0)
            ? sample_run(rho0, h_sm, scaled, shots, mix_seed(seed + i))
            : stroboscopic_run(rho0, h_sm, scaled);
    rows.push_back({record.step_count, record.dt, record.total_work,
                    record.reference_work, record.error,
                    record.total_variance, record.sample_mean,
                    record.sample_variance});
  }
  return rows;
}

}  // namespace qwft
