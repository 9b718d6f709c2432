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

#include <cstdint>
#include <vector>

#include "qwft/operators.hpp"
#include "qwft/rng.hpp"

// Gibbs states, purifications, POVMs on the purifying environment, and the
// induced decompositions {(p_i, rho_i)} of the thermal state.

namespace qwft {

// Overflow guard on beta * (max eig - min eig) for Gibbs weights.
inline constexpr double kBetaSpreadGuard = 700.0;
// Outcomes below this probability are dropped (and the rest renormalized).
inline constexpr double kOutcomeProbabilityFloor = 1e-12;

// Positive unit-trace Hermitian matrix.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix m);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

class UnitaryOperator {
 public:
  explicit UnitaryOperator(ComplexMatrix m);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

// |Psi> on system (x) environment whose environment trace is a target state.
// The environment is the purifying reference, not a physical bath; its
// dimension is fixed to the system dimension (minimal purification).
struct Purification {
  Eigen::Index system_dim = 0;
  Eigen::Index environment_dim = 0;
  ComplexVector joint_state;
};

// Positive operators A_i summing to the identity.
class POVM {
 public:
  explicit POVM(std::vector<ComplexMatrix> elements);

  int outcome_count() const { return static_cast<int>(elements_.size()); }
  Eigen::Index dim() const { return elements_.front().rows(); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

 private:
  std::vector<ComplexMatrix> elements_;
};

struct DecompositionEntry {
  double probability;
  DensityOperator state;
};

// Ensemble {(p_i, rho_i)} with sum_i p_i rho_i equal to the reference state.
struct Decomposition {
  std::vector<DecompositionEntry> entries;
  DensityOperator reference;
  bool pruned = false;       // outcomes below the probability floor dropped
  double pruned_mass = 0.0;  // total probability removed before renormalizing
};

// Checks sum p_i = 1 (1e-12) and the mixture identity (1e-9 max-norm).
void validate_decomposition(const Decomposition& d);

// exp(-beta H)/Z, computed in the eigenbasis with a max-weight shift.
DensityOperator gibbs_state(const HermitianOperator& h, double beta);

double partition_function(const HermitianOperator& h, double beta);
double log_partition_function(const HermitianOperator& h, double beta);

// Canonical purification |Psi> = sum_k sqrt(lambda_k) |v_k>|k> with the
// environment in the computational basis.
Purification purify(const DensityOperator& rho);

// Measurement on the environment: p_i = tr[rho_SE (1 (x) A_i)] and
// rho_i = tr_E[rho_SE (1 (x) A_i)] / p_i.
Decomposition decompose_via_povm(
    const Purification& psi, const POVM& povm,
    double probability_floor = kOutcomeProbabilityFloor);

// {(1, rho)}: the no-measurement baseline.
Decomposition trivial_decomposition(const DensityOperator& rho);
// Spectral ensemble {(lambda_k, |v_k><v_k|)}.
Decomposition eigenbasis_decomposition(const DensityOperator& rho);

// Haar-distributed unitary via QR of a Gaussian matrix with phase-fixed R
// diagonal. Deterministic per seed.
UnitaryOperator haar_unitary(Eigen::Index dim, Rng& rng);
UnitaryOperator haar_unitary(Eigen::Index dim, std::uint64_t seed);

// A_i = V^dag (|i><i| (x) 1) V from a Haar isometry V: C^d -> C^m (x) C^d.
// With projective = true (requires outcomes == dim), rank-1 orthogonal
// projectors in a Haar-random basis.
POVM random_povm(Eigen::Index environment_dim, int outcomes, Rng& rng,
                 bool projective = false);
POVM random_povm(Eigen::Index environment_dim, int outcomes,
                 std::uint64_t seed, bool projective = false);

}  // namespace qwft
