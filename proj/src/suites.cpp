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

#include "qwft/suites.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace qwft {

HermitianOperator random_hermitian(Eigen::Index dim, Rng& rng, double scale) {
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      g(j, k) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  ComplexMatrix h = 0.5 * scale * (g + g.adjoint().eval());
  return HermitianOperator(std::move(h));
}

HermitianOperator random_positive(Eigen::Index dim, Rng& rng, double min_eig,
                                  double max_eig) {
  const UnitaryOperator basis = haar_unitary(dim, rng);
  RealVector spectrum(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    spectrum[k] = rng.uniform(min_eig, max_eig);
  }
  return HermitianOperator(basis.matrix() * spectrum.asDiagonal() *
                           basis.matrix().adjoint());
}

DensityOperator random_density(Eigen::Index dim, Rng& rng) {
  // Hilbert-Schmidt measure: G G^dag / tr.
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      g(j, k) = Complex(rng.gaussian(), rng.gaussian());
    }
  }
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace();
  return DensityOperator(std::move(rho));
}

namespace {

Eigen::Index draw_dim(Rng& rng, Eigen::Index requested) {
  if (requested != 0) return requested;
  return 2 + rng.uniform_int(0, 2);
}

}  // namespace

ClosedScenario random_closed_scenario(std::uint64_t seed, Eigen::Index dim) {
  Rng rng(seed);
  const Eigen::Index d = draw_dim(rng, dim);
  HermitianOperator h0 = random_hermitian(d, rng);
  HermitianOperator ht = random_hermitian(d, rng);
  const double beta = rng.uniform(0.1, 5.0);
  UnitaryOperator u = haar_unitary(d, rng);
  const int outcomes = rng.uniform_int(1, 6);
  const POVM povm = random_povm(d, outcomes, rng);
  Decomposition decomposition =
      decompose_via_povm(purify(gibbs_state(h0, beta)), povm);
  return ClosedScenario{std::move(h0), std::move(ht), beta,   std::move(u),
                        std::move(decomposition),     seed};
}

OpenScenario random_open_scenario(std::uint64_t seed, Eigen::Index dim) {
  Rng rng(seed);
  const Eigen::Index d = draw_dim(rng, dim);
  const double beta = rng.uniform(0.1, 5.0);
  const double duration = 1.0;

  // Piecewise-linear ramp through three random Hamiltonians.
  HermitianOperator h_start = random_hermitian(d, rng);
  HermitianOperator h_mid = random_hermitian(d, rng);
  HermitianOperator h_end = random_hermitian(d, rng);
  std::vector<ProtocolSegment> segments;
  segments.push_back({0.0, 0.5, LinearPath{h_start, h_mid}});
  segments.push_back({0.5, 1.0, LinearPath{h_mid, h_end}});
  DrivingProtocol protocol(duration, std::move(segments));

  const int n_events = rng.uniform_int(1, 3);
  std::vector<DampingEvent> events;
  double t = 0.0;
  for (int n = 0; n < n_events; ++n) {
    t += rng.uniform(0.05, 0.9 / n_events);
    t = std::min(t, 0.95);
    const HermitianOperator h_event = protocol.hamiltonian_at(t);
    if (rng.uniform() < 0.5) {
      events.push_back({t, h_event,
                        mixture_reset_channel(h_event, beta,
                                              rng.uniform(0.05, 1.0))});
    } else {
      events.push_back({t, h_event,
                        partial_swap_channel(h_event, beta,
                                             rng.uniform(0.1, 1.5))});
    }
  }
  DampingSchedule schedule(duration, std::move(events),
                           protocol.final_hamiltonian(), beta);

  const int outcomes = rng.uniform_int(1, 6);
  const POVM povm = random_povm(d, outcomes, rng);
  Decomposition decomposition =
      decompose_via_povm(purify(gibbs_state(h_start, beta)), povm);
  return OpenScenario{std::move(protocol), std::move(schedule),
                      std::move(decomposition), seed};
}

MeterScenario standard_meter_scenario(int step_count) {
  ComplexMatrix sx(2, 2), sz(2, 2), sy(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, Complex(0, -1), Complex(0, 1), 0;
  sz << 1, 0, 0, -1;
  const ComplexMatrix id2 = identity_matrix(2);
  // Coupled joint Hamiltonian: the meter protocol modulates both the system
  // splitting and an energy offset.
  const ComplexMatrix h_sm =
      kron(sz, sz) + 0.5 * kron(sx, id2) + 0.25 * kron(id2, sx);
  JointHamiltonian joint = make_joint_hamiltonian(
      2, 2, HermitianOperator(h_sm));
  // |mu_t> = cos(omega t)|0> + sin(omega t)|1>, omega = pi/2.
  const double omega = std::numbers::pi / 2.0;
  ComplexVector mu0(2);
  mu0 << 1.0, 0.0;
  MeterProtocol protocol(2,
                         GeneratorMeterPath{HermitianOperator(omega * sy),
                                            std::move(mu0)},
                         1.0, step_count);
  const DensityOperator rho0 =
      gibbs_state(effective_hamiltonian(joint, protocol.state_at(0.0)), 1.0);
  return MeterScenario{rho0, std::move(joint), std::move(protocol)};
}

void parallel_for_indexed(int jobs, int count,
                          const std::function<void(int)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> workers;
  std::mutex error_mutex;
  std::exception_ptr first_error;
  const int worker_count = std::min(jobs, count);
  for (int w = 0; w < worker_count; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct SlackTracker {
  std::mutex mutex;
  int violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::string detail;

  void record(double slack, const std::string& what) {
    std::lock_guard<std::mutex> lock(mutex);
    if (slack < worst) {
      worst = slack;
      detail = what;
    }
  }
  void record_violation(const std::string& what) {
    std::lock_guard<std::mutex> lock(mutex);
    ++violations;
    if (detail.empty()) detail = what;
  }
};

SuiteResult finish(const std::string& name, int probes, SlackTracker& tracker) {
  return SuiteResult{name, probes, tracker.violations, tracker.worst,
                     tracker.detail};
}

}  // namespace

SuiteResult suite_closed_bound_chain(int count, std::uint64_t seed,
                                     Eigen::Index dim, double tol_rel) {
  SlackTracker tracker;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t scenario_seed = mix_seed(seed + i);
    try {
      const ClosedScenario sc = random_closed_scenario(scenario_seed, dim);
      const WorkReport report =
          work_report(sc.decomposition, sc.u, sc.h0, sc.ht, sc.beta);
      const double scale = std::max(1.0, std::abs(report.average_work));
      tracker.record(std::min(report.gap_jensen, report.gap_quantum) / scale,
                     "seed " + std::to_string(scenario_seed));
      // Redundant with the construction-time check, but makes the suite's
      // tolerance explicit and configurable.
      if (report.gap_quantum < -tol_rel * scale ||
          report.gap_jensen < -tol_rel * scale ||
          report.estimator >
              std::exp(-report.beta * report.delta_f) * (1.0 + tol_rel)) {
        tracker.record_violation("seed " + std::to_string(scenario_seed));
      }
    } catch (const InequalityViolation& err) {
      tracker.record_violation(err.what());
    }
  }
  return finish("closed_bound_chain", count, tracker);
}

SuiteResult suite_tpm_identity(int count, std::uint64_t seed,
                               Eigen::Index dim) {
  SlackTracker tracker;
  tracker.worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t scenario_seed = mix_seed(seed + i);
    const ClosedScenario sc = random_closed_scenario(scenario_seed, dim);
    const double tpm = tpm_estimator(sc.h0, sc.ht, sc.u, sc.beta);
    const double target = std::exp(-sc.beta * delta_f(sc.h0, sc.ht, sc.beta));
    const double residual = std::abs(tpm - target) / target;
    std::lock_guard<std::mutex> lock(tracker.mutex);
    if (residual > tracker.worst) {
      tracker.worst = residual;
      tracker.detail = "seed " + std::to_string(scenario_seed);
    }
    if (residual > 1e-10) ++tracker.violations;
  }
  return finish("tpm_identity", count, tracker);
}

SuiteResult suite_open_bound(int count, std::uint64_t seed, Eigen::Index dim,
                             double tol_rel) {
  SlackTracker tracker;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t scenario_seed = mix_seed(seed + i);
    try {
      const OpenScenario sc = random_open_scenario(scenario_seed, dim);
      const WorkReport report =
          open_work_report(sc.decomposition, sc.schedule, sc.protocol, 64);
      const double scale = std::max(1.0, std::abs(report.average_work));
      tracker.record(std::min(report.gap_jensen, report.gap_quantum) / scale,
                     "seed " + std::to_string(scenario_seed));
      if (report.gap_quantum < -tol_rel * scale) {
        tracker.record_violation("seed " + std::to_string(scenario_seed));
      }
    } catch (const InequalityViolation& err) {
      tracker.record_violation(err.what());
    }
  }
  return finish("open_bound", count, tracker);
}

SuiteResult suite_peierls_bogoliubov(int count, std::uint64_t seed,
                                     Eigen::Index dim) {
  SlackTracker tracker;
  for (int i = 0; i < count; ++i) {
    Rng rng(mix_seed(seed + i));
    const Eigen::Index d = draw_dim(rng, dim);
    try {
      const InequalityProbe probe = peierls_bogoliubov_gap(
          random_hermitian(d, rng), random_hermitian(d, rng));
      tracker.record(probe.gap / std::max(1.0, std::abs(probe.rhs)),
                     probe.inputs_digest);
    } catch (const InequalityViolation& err) {
      tracker.record_violation(err.what());
    }
  }
  return finish("peierls_bogoliubov", count, tracker);
}

SuiteResult suite_lieb_concavity(int count, std::uint64_t seed,
                                 Eigen::Index dim) {
  SlackTracker tracker;
  for (int i = 0; i < count; ++i) {
    Rng rng(mix_seed(seed + i));
    const Eigen::Index d = draw_dim(rng, dim);
    try {
      const InequalityProbe probe = concavity_probe(
          random_positive(d, rng, 0.05, 2.0), random_positive(d, rng, 0.05, 2.0),
          rng.uniform(), random_hermitian(d, rng));
      tracker.record(probe.gap / std::max(1.0, std::abs(probe.rhs)),
                     probe.inputs_digest);
    } catch (const InequalityViolation& err) {
      tracker.record_violation(err.what());
    }
  }
  return finish("lieb_concavity", count, tracker);
}

SuiteResult suite_lgt(int count, std::uint64_t seed, Eigen::Index dim) {
  SlackTracker tracker;
  for (int i = 0; i < count; ++i) {
    Rng rng(mix_seed(seed + i));
    const Eigen::Index d = draw_dim(rng, dim);
    try {
      const InequalityProbe probe =
          lgt_gap(random_positive(d, rng, 0.05, 2.0),
                  random_positive(d, rng, 0.05, 2.0),
                  random_positive(d, rng, 0.05, 2.0));
      tracker.record(probe.gap / std::max(1.0, std::abs(probe.rhs)),
                     probe.inputs_digest);
    } catch (const InequalityViolation& err) {
      tracker.record_violation(err.what());
    }
  }
  return finish("lgt_triple", count, tracker);
}

SuiteResult suite_stinespring_lifted(int count, std::uint64_t seed,
                                     Eigen::Index dim) {
  SlackTracker tracker;
  tracker.worst = 0.0;
  for (int i = 0; i < count; ++i) {
    Rng rng(mix_seed(seed + i));
    const Eigen::Index d = draw_dim(rng, dim);
    // Bounded beta * spread keeps the lifted-state logs well conditioned;
    // the 1e-8 identity residual is a numerical-precision budget, not a
    // physical tolerance.
    const double beta = rng.uniform(0.2, 2.5);
    const HermitianOperator h_a = random_positive(d, rng, -1.5, 1.5);
    const HermitianOperator h_b = random_positive(d, rng, -1.5, 1.5);
    const HermitianOperator h_c = random_positive(d, rng, -1.5, 1.5);
    const QuantumChannel channel =
        (rng.uniform() < 0.5)
            ? mixture_reset_channel(h_b, beta, rng.uniform(0.05, 1.0))
            : partial_swap_channel(h_b, beta, rng.uniform(0.1, 1.5));
    try {
      const LiftedIdentityResidual residual = lifted_work_identity_check(
          random_density(d, rng), channel, h_a, h_b, h_c, beta);
      const double worst = std::max(residual.first, residual.second);
      std::lock_guard<std::mutex> lock(tracker.mutex);
      if (worst > tracker.worst) {
        tracker.worst = worst;
        tracker.detail = "seed " + std::to_string(mix_seed(seed + i));
      }
    } catch (const InequalityViolation& err) {
      tracker.record_violation(err.what());
    }
  }
  return finish("stinespring_lifted", count, tracker);
}

std::vector<SuiteResult> run_verification_suites(int probes_per_suite,
                                                 Eigen::Index dim,
                                                 std::uint64_t seed,
                                                 double tol_rel, int jobs) {
  using SuiteFn = std::function<SuiteResult()>;
  const int heavy = probes_per_suite;
  // The lifted-identity suite dilates channels and diagonalizes joint
  // matrices, so it runs a fraction of the probe count.
  const int lifted = std::max(1, probes_per_suite / 10);
  std::vector<SuiteFn> suites = {
      [&] { return suite_closed_bound_chain(heavy, seed + 1, dim, tol_rel); },
      [&] { return suite_tpm_identity(heavy, seed + 2, dim); },
      [&] { return suite_open_bound(std::max(1, heavy / 4), seed + 3, dim,
                                    tol_rel); },
      [&] { return suite_peierls_bogoliubov(heavy, seed + 4, dim); },
      [&] { return suite_lieb_concavity(heavy, seed + 5, dim); },
      [&] { return suite_lgt(heavy, seed + 6, dim); },
      [&] { return suite_stinespring_lifted(lifted, seed + 7, dim); },
  };
  std::vector<SuiteResult> results(suites.size(),
                                   SuiteResult{"", 0, 0, 0.0, ""});
  parallel_for_indexed(jobs, static_cast<int>(suites.size()),
                       [&](int i) { results[i] = suites[i](); });
  return results;
}

}  // namespace qwft
