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

#include "qwft/inequalities.hpp"
#include "qwft/meter.hpp"

// Randomized verification suites (the `verify` command) and the scenario
// generators they share with the test suite. Every generator is a pure
// function of its seed.

namespace qwft {

HermitianOperator random_hermitian(Eigen::Index dim, Rng& rng,
                                   double scale = 1.0);
// Strictly positive with spectrum in [min_eig, max_eig].
HermitianOperator random_positive(Eigen::Index dim, Rng& rng, double min_eig,
                                  double max_eig);
DensityOperator random_density(Eigen::Index dim, Rng& rng);

// Closed-system scenario: random Hamiltonian pair, beta in [0.1, 5], Haar
// unitary, POVM-induced decomposition with up to 6 outcomes. dim = 0 draws
// the dimension from {2, 3, 4}.
struct ClosedScenario {
  HermitianOperator h0;
  HermitianOperator ht;
  double beta;
  UnitaryOperator u;
  Decomposition decomposition;
  std::uint64_t seed;
};
ClosedScenario random_closed_scenario(std::uint64_t seed, Eigen::Index dim = 0);

// Open-system scenario: piecewise-linear driving with 1..3 verified
// Gibbs-preserving damping events drawn from both channel families.
struct OpenScenario {
  DrivingProtocol protocol;
  DampingSchedule schedule;
  Decomposition decomposition;
  std::uint64_t seed;
};
OpenScenario random_open_scenario(std::uint64_t seed, Eigen::Index dim = 0);

// The fixed qubit (x) qubit meter scenario used by convergence and variance
// scans: rotating meter protocol over a coupled joint Hamiltonian.
struct MeterScenario {
  DensityOperator rho0;
  JointHamiltonian h_sm;
  MeterProtocol protocol;
};
MeterScenario standard_meter_scenario(int step_count);

struct SuiteResult {
  std::string name;
  int probes = 0;
  int violations = 0;
  // Smallest normalized slack observed across the suite (negative would be a
  // violation); for identity-style suites, the largest residual instead.
  double worst_slack = 0.0;
  std::string detail;
};

SuiteResult suite_closed_bound_chain(int count, std::uint64_t seed,
                                     Eigen::Index dim, double tol_rel);
SuiteResult suite_tpm_identity(int count, std::uint64_t seed, Eigen::Index dim);
SuiteResult suite_open_bound(int count, std::uint64_t seed, Eigen::Index dim,
                             double tol_rel);
SuiteResult suite_peierls_bogoliubov(int count, std::uint64_t seed,
                                     Eigen::Index dim);
SuiteResult suite_lieb_concavity(int count, std::uint64_t seed,
                                 Eigen::Index dim);
SuiteResult suite_lgt(int count, std::uint64_t seed, Eigen::Index dim);
SuiteResult suite_stinespring_lifted(int count, std::uint64_t seed,
                                     Eigen::Index dim);

// Runs all suites; jobs > 1 fans the per-seed work across a thread pool with
// deterministic, order-independent aggregation.
std::vector<SuiteResult> run_verification_suites(int probes_per_suite,
                                                 Eigen::Index dim,
                                                 std::uint64_t seed,
                                                 double tol_rel, int jobs);

// Deterministic helper used by the suites and the CLI to fan indexed tasks
// across threads; results are merged in index order.
void parallel_for_indexed(int jobs, int count,
                          const std::function<void(int)>& body);

}  // namespace qwft
