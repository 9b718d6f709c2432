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

#include "qwft/driving.hpp"

// Minimization of the operational bound dF_tilde over the experimenter's
// controls: the unitary (through its Hermitian generator) and the POVM on
// the purifying environment (through a dilating unitary). Derivative-free
// simplex search with random restarts; every evaluated point is certified
// against the lower bound dF.

namespace qwft {

struct OptimizationConfig {
  int restarts = 8;
  int max_iters = 4000;        // simplex iterations per restart round
  double initial_step = 0.5;   // initial simplex edge length
  std::uint64_t seed = 0;
  double tol = 1e-8;           // convergence tolerance on the objective
  int povm_outcomes = 2;
  int jobs = 1;                // restarts run in parallel when > 1
  // Optional warm start used for restart 0 (e.g. a known saturating point).
  std::optional<std::vector<double>> initial_point;
};

struct OptimizationResult {
  double best_objective = 0.0;          // dF_tilde at the best point
  std::vector<double> best_parameters;  // concatenated (theta_U, theta_POVM)
  double delta_f = 0.0;
  double certificate_gap = 0.0;         // best_objective - delta_f
  std::vector<double> best_trace;       // best-so-far, monotone non-increasing
  bool converged = false;
  long evaluations = 0;
};

// U = exp(-i G(theta)) with G assembled from theta in a fixed canonical
// basis: d diagonal reals, then re/im pairs for the upper triangle
// (row-major). Surjective onto the unitary group modulo 2 pi windings.
UnitaryOperator unitary_from_params(const std::vector<double>& theta);

// Inverse of unitary_from_params via the principal matrix logarithm; useful
// for warm starts at constructed points.
std::vector<double> params_from_unitary(const UnitaryOperator& u);

// POVM from a dilating unitary W on C^outcomes (x) C^env_dim built by
// unitary_from_params; theta has length (outcomes * env_dim)^2.
POVM povm_from_params(const std::vector<double>& theta, Eigen::Index env_dim,
                      int outcomes);

// Minimizes dF_tilde(U, D) for the scenario (h0 -> ht at inverse temperature
// beta). Throws InequalityViolation if any evaluated point undercuts dF
// beyond tolerance (that would be an implementation bug, not a feature of
// the landscape).
OptimizationResult minimize_bound(const HermitianOperator& h0,
                                  const HermitianOperator& ht, double beta,
                                  const OptimizationConfig& config);

}  // namespace qwft
