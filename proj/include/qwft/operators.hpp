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

#include <complex>

#include <Eigen/Dense>

#include "qwft/errors.hpp"

// Dense complex-matrix calculus for Hermitian operators: eigendecomposition,
// spectral matrix functions, tensor products, partial traces, commutators.
// Everything here is pure and value-based; target dimensions are small
// (system x environment x meter <= 64), so dense storage is used throughout.

namespace qwft {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Relative hermiticity tolerance: |M - M^dag|_max <= factor * |M|_max.
inline constexpr double kHermitianTolFactor = 1e-12;
// Smallest eigenvalue accepted by matrix_log / matrix_inverse_shifted.
inline constexpr double kPosDefFloor = 1e-14;

// Entrywise max-norm.
double max_abs(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);

// Real part of a trace-like scalar; throws InequalityViolation if the
// imaginary residue exceeds numerical noise (1e-12 relative to scale).
double checked_real(Complex value, double scale = 1.0);

// Hermitian matrix with validated (and then exactly symmetrized) entries.
// A default-constructed instance is empty (dim 0) until assigned.
class HermitianOperator {
 public:
  HermitianOperator() : m_(0, 0) {}
  explicit HermitianOperator(ComplexMatrix m,
                             double tol_factor = kHermitianTolFactor);

  Eigen::Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

// Spectral decomposition M = V diag(lambda) V^dag with ascending eigenvalues
// and orthonormal eigenvector columns. Deterministic for a fixed input;
// degenerate subspaces are resolved by the solver's canonical
// orthogonalization, so repeated runs agree bit-for-bit.
struct EigenSystem {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

EigenSystem eig_hermitian(const HermitianOperator& m);

// f applied to the spectrum, eigenvectors preserved.
HermitianOperator matrix_exp(const HermitianOperator& m);
// Requires min eigenvalue > kPosDefFloor; reports the offending eigenvalue.
HermitianOperator matrix_log(const HermitianOperator& m);
// (M + shift * 1)^-1 with the same positivity domain as matrix_log.
HermitianOperator matrix_inverse_shifted(const HermitianOperator& m,
                                         double shift);

// exp(-i * scale * generator); unitary by construction.
ComplexMatrix unitary_exp(const HermitianOperator& generator,
                          double scale = 1.0);

ComplexMatrix identity_matrix(Eigen::Index dim);

// Kronecker product, row-major block convention: index (i, k) = i * dim(B) + k.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Keep { System, Environment };

// Trace-preserving reduction of an operator on system (x) environment. The
// joint index convention matches kron: (s, e) = s * environment_dim + e.
ComplexMatrix partial_trace(const ComplexMatrix& m, Eigen::Index system_dim,
                            Eigen::Index environment_dim, Keep keep);

// AB - BA; anti-Hermitian for Hermitian inputs.
ComplexMatrix commutator(const HermitianOperator& a, const HermitianOperator& b);

}  // namespace qwft
