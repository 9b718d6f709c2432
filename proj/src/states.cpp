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

#include "qwft/states.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace qwft {

DensityOperator::DensityOperator(ComplexMatrix m) {
  HermitianOperator herm(std::move(m));  // validates shape and hermiticity
  const EigenSystem es = eig_hermitian(herm);
  if (es.eigenvalues[0] < -1e-12) {
    std::ostringstream os;
    os << "DensityOperator: negative eigenvalue " << es.eigenvalues[0];
    throw InvalidInput(os.str());
  }
  const double trace = es.eigenvalues.sum();
  if (std::abs(trace - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "DensityOperator: trace " << trace << " differs from 1";
    throw InvalidInput(os.str());
  }
  m_ = herm.matrix();
}

UnitaryOperator::UnitaryOperator(ComplexMatrix m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidInput("UnitaryOperator: matrix must be square and non-empty");
  }
  if (!all_finite(m)) {
    throw InvalidInput("UnitaryOperator: matrix has non-finite entries");
  }
  const double defect =
      max_abs(m.adjoint() * m - identity_matrix(m.rows()));
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "UnitaryOperator: U^dag U deviates from identity by " << defect;
    throw InvalidInput(os.str());
  }
  m_ = std::move(m);
}

POVM::POVM(std::vector<ComplexMatrix> elements) {
  if (elements.empty()) {
    throw InvalidInput("POVM: needs at least one element");
  }
  const Eigen::Index d = elements.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    HermitianOperator herm(elements[i]);  // validates
    if (herm.dim() != d) {
      throw InvalidInput("POVM: elements have mismatched dimensions");
    }
    const EigenSystem es = eig_hermitian(herm);
    if (es.eigenvalues[0] < -1e-12) {
      std::ostringstream os;
      os << "POVM: element " << i << " has negative eigenvalue "
         << es.eigenvalues[0];
      throw InvalidInput(os.str());
    }
    elements[i] = herm.matrix();
    sum += elements[i];
  }
  const double defect = max_abs(sum - identity_matrix(d));
  if (defect > 1e-10) {
    std::ostringstream os;
    os << "POVM: completeness defect " << defect;
    throw InvalidInput(os.str());
  }
  elements_ = std::move(elements);
}

void validate_decomposition(const Decomposition& d) {
  if (d.entries.empty()) {
    throw InvalidInput("Decomposition: no entries");
  }
  double total = 0.0;
  const Eigen::Index dim = d.reference.dim();
  ComplexMatrix mixture = ComplexMatrix::Zero(dim, dim);
  for (const auto& entry : d.entries) {
    if (!(entry.probability >= 0.0)) {
      throw InvalidInput("Decomposition: negative probability");
    }
    if (entry.state.dim() != dim) {
      throw InvalidInput("Decomposition: entry dimension mismatch");
    }
    total += entry.probability;
    mixture += entry.probability * entry.state.matrix();
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "Decomposition: probabilities sum to " << total;
    throw InvalidInput(os.str());
  }
  const double defect = max_abs(mixture - d.reference.matrix());
  if (defect > 1e-9) {
    std::ostringstream os;
    os << "Decomposition: mixture deviates from reference by " << defect;
    throw InvalidInput(os.str());
  }
}

namespace {

// Shift-stabilized Gibbs weights exp(-beta (lambda_k - lambda_min)).
struct GibbsWeights {
  EigenSystem es;
  RealVector weights;
  double shifted_sum;  // sum of weights
  double min_eig;
};

GibbsWeights gibbs_weights(const HermitianOperator& h, double beta) {
  if (!std::isfinite(beta) || beta < 0.0) {
    throw InvalidInput("gibbs: beta must be finite and >= 0");
  }
  GibbsWeights gw{eig_hermitian(h), {}, 0.0, 0.0};
  const Eigen::Index d = gw.es.eigenvalues.size();
  gw.min_eig = gw.es.eigenvalues[0];
  const double spread = gw.es.eigenvalues[d - 1] - gw.min_eig;
  if (beta * spread > kBetaSpreadGuard) {
    std::ostringstream os;
    os << "gibbs: beta * spectral spread = " << beta * spread
       << " exceeds the overflow guard " << kBetaSpreadGuard;
    throw RangeError(os.str());
  }
  gw.weights.resize(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    gw.weights[k] = std::exp(-beta * (gw.es.eigenvalues[k] - gw.min_eig));
  }
  gw.shifted_sum = gw.weights.sum();
  return gw;
}

}  // namespace

DensityOperator gibbs_state(const HermitianOperator& h, double beta) {
  const GibbsWeights gw = gibbs_weights(h, beta);
  RealVector probs = gw.weights / gw.shifted_sum;
  ComplexMatrix rho =
      gw.es.eigenvectors * probs.asDiagonal() * gw.es.eigenvectors.adjoint();
  return DensityOperator(std::move(rho));
}

double log_partition_function(const HermitianOperator& h, double beta) {
  const GibbsWeights gw = gibbs_weights(h, beta);
  return -beta * gw.min_eig + std::log(gw.shifted_sum);
}

double partition_function(const HermitianOperator& h, double beta) {
  const double log_z = log_partition_function(h, beta);
  if (log_z > 709.0) {
    std::ostringstream os;
    os << "partition_function: ln Z = " << log_z << " would overflow";
    throw RangeError(os.str());
  }
  return std::exp(log_z);
}

Purification purify(const DensityOperator& rho) {
  const EigenSystem es = eig_hermitian(HermitianOperator(rho.matrix()));
  const Eigen::Index d = rho.dim();
  ComplexVector psi = ComplexVector::Zero(d * d);
  double norm2 = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double lambda = std::max(es.eigenvalues[k], 0.0);
    const double amp = std::sqrt(lambda);
    norm2 += lambda;
    for (Eigen::Index s = 0; s < d; ++s) {
      psi[s * d + k] += amp * es.eigenvectors(s, k);
    }
  }
  psi /= std::sqrt(norm2);
  Purification out{d, d, std::move(psi)};

  const ComplexMatrix rho_se = out.joint_state * out.joint_state.adjoint();
  const double round_trip =
      max_abs(partial_trace(rho_se, d, d, Keep::System) - rho.matrix());
  if (round_trip > 1e-10) {
    std::ostringstream os;
    os << "purify: partial-trace round trip deviates by " << round_trip;
    throw InvalidInput(os.str());
  }
  return out;
}

Decomposition decompose_via_povm(const Purification& psi, const POVM& povm,
                                 double probability_floor) {
  if (povm.dim() != psi.environment_dim) {
    std::ostringstream os;
    os << "decompose_via_povm: POVM dimension " << povm.dim()
       << " does not match environment dimension " << psi.environment_dim;
    throw InvalidInput(os.str());
  }
  const Eigen::Index ds = psi.system_dim;
  const Eigen::Index de = psi.environment_dim;
  const ComplexMatrix rho_se = psi.joint_state * psi.joint_state.adjoint();
  const ComplexMatrix id_s = identity_matrix(ds);

  DensityOperator reference(partial_trace(rho_se, ds, de, Keep::System));

  std::vector<double> probabilities;
  std::vector<ComplexMatrix> states;
  double pruned_mass = 0.0;
  for (const ComplexMatrix& element : povm.elements()) {
    const ComplexMatrix reduced =
        partial_trace(rho_se * kron(id_s, element), ds, de, Keep::System);
    const double p = checked_real(reduced.trace());
    if (p < probability_floor) {
      pruned_mass += std::max(p, 0.0);
      continue;
    }
    // The partial trace of rho_SE (1 (x) A_i) is Hermitian and positive even
    // though the product itself is not; symmetrize away rounding noise.
    ComplexMatrix state = (reduced + reduced.adjoint().eval()) / (2.0 * p);
    probabilities.push_back(p);
    states.push_back(std::move(state));
  }
  if (probabilities.empty()) {
    throw InvalidInput("decompose_via_povm: all outcomes below the "
                       "probability floor");
  }
  double kept = 0.0;
  for (double p : probabilities) kept += p;
  Decomposition out{{}, std::move(reference), pruned_mass > 0.0, pruned_mass};
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    out.entries.push_back(
        {probabilities[i] / kept, DensityOperator(std::move(states[i]))});
  }
  validate_decomposition(out);
  return out;
}

Decomposition trivial_decomposition(const DensityOperator& rho) {
  Decomposition out{{{1.0, rho}}, rho, false, 0.0};
  validate_decomposition(out);
  return out;
}

Decomposition eigenbasis_decomposition(const DensityOperator& rho) {
  const EigenSystem es = eig_hermitian(HermitianOperator(rho.matrix()));
  Decomposition out{{}, rho, false, 0.0};
  double kept = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
    const double p = es.eigenvalues[k];
    if (p < kOutcomeProbabilityFloor) {
      out.pruned = true;
      out.pruned_mass += std::max(p, 0.0);
      continue;
    }
    const ComplexVector v = es.eigenvectors.col(k);
    out.entries.push_back({p, DensityOperator(v * v.adjoint())});
    kept += p;
  }
  for (auto& entry : out.entries) entry.probability /= kept;
  validate_decomposition(out);
  return out;
}

UnitaryOperator haar_unitary(Eigen::Index dim, Rng& rng) {
  if (dim < 1) throw InvalidInput("haar_unitary: dimension must be >= 1");
  ComplexMatrix g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      g(j, k) = Complex(rng.gaussian(), rng.gaussian()) / std::sqrt(2.0);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    q.col(k) *= (mag > 0.0) ? diag / mag : Complex(1.0, 0.0);
  }
  return UnitaryOperator(std::move(q));
}

UnitaryOperator haar_unitary(Eigen::Index dim, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(dim, rng);
}

POVM random_povm(Eigen::Index environment_dim, int outcomes, Rng& rng,
                 bool projective) {
  if (outcomes < 1) throw InvalidInput("random_povm: outcomes must be >= 1");
  std::vector<ComplexMatrix> elements;
  if (projective) {
    if (outcomes != environment_dim) {
      throw InvalidInput(
          "random_povm: projective sampling requires outcomes == dimension");
    }
    const UnitaryOperator q = haar_unitary(environment_dim, rng);
    for (int i = 0; i < outcomes; ++i) {
      const ComplexVector v = q.matrix().col(i);
      elements.push_back(v * v.adjoint());
    }
    return POVM(std::move(elements));
  }
  // Haar isometry V = W (|0> (x) 1): the first environment_dim columns of a
  // Haar unitary on C^outcomes (x) C^environment_dim.
  const UnitaryOperator w = haar_unitary(outcomes * environment_dim, rng);
  const ComplexMatrix v = w.matrix().leftCols(environment_dim);
  for (int i = 0; i < outcomes; ++i) {
    const ComplexMatrix block = v.middleRows(i * environment_dim,
                                             environment_dim);
    elements.push_back(block.adjoint() * block);
  }
  return POVM(std::move(elements));
}

POVM random_povm(Eigen::Index environment_dim, int outcomes,
                 std::uint64_t seed, bool projective) {
  Rng rng(seed);
  return random_povm(environment_dim, outcomes, rng, projective);
}

}  // namespace qwft
