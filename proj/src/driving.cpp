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

#include "qwft/driving.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qwft {

namespace {

constexpr double kTimeTol = 1e-12;

Eigen::Index path_dim(const HamiltonianPath& path) {
  return std::visit(
      [](const auto& p) -> Eigen::Index {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantPath>) {
          return p.hamiltonian.dim();
        } else if constexpr (std::is_same_v<T, LinearPath>) {
          return p.start.dim();
        } else {
          return p.hamiltonians.front().dim();
        }
      },
      path);
}

HermitianOperator path_at(const ProtocolSegment& seg, double t) {
  return std::visit(
      [&](const auto& p) -> HermitianOperator {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ConstantPath>) {
          return p.hamiltonian;
        } else if constexpr (std::is_same_v<T, LinearPath>) {
          const double span = seg.t_end - seg.t_start;
          const double x = std::clamp((t - seg.t_start) / span, 0.0, 1.0);
          return HermitianOperator((1.0 - x) * p.start.matrix() +
                                   x * p.end.matrix());
        } else {
          const auto& times = p.times;
          if (t <= times.front()) return p.hamiltonians.front();
          if (t >= times.back()) return p.hamiltonians.back();
          const auto it = std::upper_bound(times.begin(), times.end(), t);
          const std::size_t k = static_cast<std::size_t>(it - times.begin());
          const double x = (t - times[k - 1]) / (times[k] - times[k - 1]);
          return HermitianOperator((1.0 - x) * p.hamiltonians[k - 1].matrix() +
                                   x * p.hamiltonians[k].matrix());
        }
      },
      seg.path);
}

}  // namespace

DrivingProtocol::DrivingProtocol(double duration,
                                 std::vector<ProtocolSegment> segments)
    : duration_(duration), segments_(std::move(segments)) {
  if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
    throw InvalidInput("DrivingProtocol: duration must be positive");
  }
  if (segments_.empty()) {
    throw InvalidInput("DrivingProtocol: needs at least one segment");
  }
  dim_ = path_dim(segments_.front().path);
  double cursor = 0.0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& seg = segments_[i];
    if (std::abs(seg.t_start - cursor) > kTimeTol || seg.t_end <= seg.t_start) {
      std::ostringstream os;
      os << "DrivingProtocol: segment " << i << " does not continue at t="
         << cursor;
      throw InvalidInput(os.str());
    }
    if (path_dim(seg.path) != dim_) {
      throw InvalidInput("DrivingProtocol: segments have mismatched dimensions");
    }
    if (const auto* sampled = std::get_if<SampledPath>(&seg.path)) {
      if (sampled->times.size() < 2 ||
          sampled->times.size() != sampled->hamiltonians.size() ||
          !std::is_sorted(sampled->times.begin(), sampled->times.end()) ||
          sampled->times.front() > seg.t_start + kTimeTol ||
          sampled->times.back() < seg.t_end - kTimeTol) {
        std::ostringstream os;
        os << "DrivingProtocol: segment " << i
           << " has invalid sample times (must be sorted and span the segment)";
        throw InvalidInput(os.str());
      }
    }
    cursor = seg.t_end;
  }
  if (std::abs(cursor - duration_) > kTimeTol) {
    throw InvalidInput("DrivingProtocol: segments do not cover [0, duration]");
  }
}

HermitianOperator DrivingProtocol::hamiltonian_at(double t) const {
  if (t < -kTimeTol || t > duration_ + kTimeTol) {
    std::ostringstream os;
    os << "DrivingProtocol: time " << t << " outside [0, " << duration_ << "]";
    throw InvalidInput(os.str());
  }
  t = std::clamp(t, 0.0, duration_);
  for (const auto& seg : segments_) {
    if (t <= seg.t_end || &seg == &segments_.back()) {
      return path_at(seg, t);
    }
  }
  return path_at(segments_.back(), t);  // unreachable
}

UnitaryOperator propagator(const DrivingProtocol& protocol, int steps) {
  return propagator(protocol, 0.0, protocol.duration(), steps);
}

UnitaryOperator propagator(const DrivingProtocol& protocol, double t_begin,
                           double t_end, int steps) {
  if (steps < 1) throw InvalidInput("propagator: steps must be >= 1");
  if (t_end < t_begin - kTimeTol) {
    throw InvalidInput("propagator: t_end before t_begin");
  }
  ComplexMatrix u = identity_matrix(protocol.dim());
  const double span = t_end - t_begin;
  if (span <= kTimeTol) return UnitaryOperator(std::move(u));
  const double dt = span / steps;
  for (int k = 0; k < steps; ++k) {
    const double t_mid = t_begin + (k + 0.5) * dt;
    u = unitary_exp(protocol.hamiltonian_at(t_mid), dt) * u;
  }
  return UnitaryOperator(std::move(u));
}

double conditional_work(const DensityOperator& rho, const UnitaryOperator& u,
                        const HermitianOperator& h0,
                        const HermitianOperator& ht) {
  if (rho.dim() != u.dim() || rho.dim() != h0.dim() || rho.dim() != ht.dim()) {
    throw InvalidInput("conditional_work: dimension mismatch");
  }
  const ComplexMatrix observable =
      u.matrix().adjoint() * ht.matrix() * u.matrix() - h0.matrix();
  const Complex value = (rho.matrix() * observable).trace();
  return checked_real(value, max_abs(observable));
}

double delta_f(const HermitianOperator& h0, const HermitianOperator& ht,
               double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidInput("delta_f: beta must be finite and > 0");
  }
  return -(log_partition_function(ht, beta) -
           log_partition_function(h0, beta)) /
         beta;
}

WorkReport assemble_work_report(const std::vector<WorkOutcome>& outcomes,
                                double beta, double delta_f_value,
                                ReportMeta meta) {
  if (!(beta > 0.0)) {
    throw InvalidInput("work report: beta must be > 0");
  }
  WorkReport report;
  report.outcomes = outcomes;
  report.beta = beta;
  report.delta_f = delta_f_value;
  report.meta = std::move(meta);

  double w_avg = 0.0;
  double max_exponent = -std::numeric_limits<double>::infinity();
  for (const auto& o : outcomes) {
    w_avg += o.probability * o.work;
    max_exponent = std::max(max_exponent, -beta * o.work);
  }
  // log-sum-exp with max shift; the estimator is an average of exponentials
  // with wildly different scales at large beta.
  double shifted = 0.0;
  for (const auto& o : outcomes) {
    shifted += o.probability * std::exp(-beta * o.work - max_exponent);
  }
  const double log_estimator = max_exponent + std::log(shifted);

  report.average_work = w_avg;
  report.estimator = std::exp(log_estimator);
  report.delta_f_tilde = -log_estimator / beta;
  report.gap_jensen = report.average_work - report.delta_f_tilde;
  report.gap_quantum = report.delta_f_tilde - report.delta_f;

  const double scale = std::max(1.0, std::abs(report.average_work));
  if (report.gap_jensen < -1e-9 * scale) {
    std::ostringstream os;
    os << "work report: Jensen bound violated, W_avg - dF_tilde = "
       << report.gap_jensen;
    throw InequalityViolation(os.str());
  }
  if (report.gap_quantum < -1e-9 * scale) {
    std::ostringstream os;
    os << "work report: fluctuation bound violated, dF_tilde - dF = "
       << report.gap_quantum;
    throw InequalityViolation(os.str());
  }
  return report;
}

WorkReport work_report(const Decomposition& d, const UnitaryOperator& u,
                       const HermitianOperator& h0, const HermitianOperator& ht,
                       double beta, ReportMeta meta) {
  validate_decomposition(d);
  const DensityOperator gibbs0 = gibbs_state(h0, beta);
  const double reference_defect =
      max_abs(d.reference.matrix() - gibbs0.matrix());
  if (reference_defect > 1e-9) {
    std::ostringstream os;
    os << "work_report: decomposition reference deviates from the Gibbs state "
       << "of H_0 by " << reference_defect
       << "; the bound is only claimed for decompositions of the Gibbs state";
    throw PreconditionError(os.str());
  }
  std::vector<WorkOutcome> outcomes;
  outcomes.reserve(d.entries.size());
  for (const auto& entry : d.entries) {
    outcomes.push_back(
        {entry.probability, conditional_work(entry.state, u, h0, ht)});
  }
  meta.pruned_mass = meta.pruned_mass || d.pruned;
  return assemble_work_report(outcomes, beta, delta_f(h0, ht, beta),
                              std::move(meta));
}

double tpm_estimator(const HermitianOperator& h0, const HermitianOperator& ht,
                     const UnitaryOperator& u, double beta) {
  if (h0.dim() != ht.dim() || h0.dim() != u.dim()) {
    throw InvalidInput("tpm_estimator: dimension mismatch");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidInput("tpm_estimator: beta must be finite and > 0");
  }
  const EigenSystem e0 = eig_hermitian(h0);
  const EigenSystem et = eig_hermitian(ht);
  const Eigen::Index d = h0.dim();
  // Thermal weights of H_0, shift-stabilized.
  const double min0 = e0.eigenvalues[0];
  RealVector w0(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    w0[j] = std::exp(-beta * (e0.eigenvalues[j] - min0));
  }
  w0 /= w0.sum();
  // Transition amplitudes between the energy eigenbases across U.
  const ComplexMatrix overlap =
      et.eigenvectors.adjoint() * u.matrix() * e0.eigenvectors;
  double total = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double prob = std::norm(overlap(k, j));
      total += w0[j] * prob *
               std::exp(-beta * (et.eigenvalues[k] - e0.eigenvalues[j]));
    }
  }
  return total;
}

}  // namespace qwft
