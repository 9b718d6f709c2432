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

#include "qwft/operators.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace qwft {

double max_abs(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (!std::isfinite(m(j, k).real()) || !std::isfinite(m(j, k).imag())) {
        return false;
      }
    }
  }
  return true;
}

double hermiticity_defect(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

double checked_real(Complex value, double scale) {
  const double tol = 1e-12 * std::max(1.0, std::abs(scale));
  if (std::abs(value.imag()) > tol) {
    std::ostringstream os;
    os << "imaginary residue " << value.imag()
       << " exceeds tolerance " << tol << " on a real-valued quantity";
    throw InequalityViolation(os.str());
  }
  return value.real();
}

HermitianOperator::HermitianOperator(ComplexMatrix m, double tol_factor) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidInput("HermitianOperator: matrix must be square and non-empty");
  }
  if (!all_finite(m)) {
    throw InvalidInput("HermitianOperator: matrix has non-finite entries");
  }
  const double defect = hermiticity_defect(m);
  const double tol = tol_factor * std::max(1.0, max_abs(m));
  if (defect > tol) {
    std::ostringstream os;
    os << "HermitianOperator: hermiticity defect " << defect
       << " exceeds tolerance " << tol;
    throw InvalidInput(os.str());
  }
  // Symmetrize so downstream spectral calculus sees an exactly Hermitian
  // matrix; the perturbation is bounded by the validated defect.
  m_ = 0.5 * (m + m.adjoint().eval());
}

EigenSystem eig_hermitian(const HermitianOperator& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw InvalidInput("eig_hermitian: eigendecomposition failed to converge");
  }
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

HermitianOperator apply_spectral(const HermitianOperator& m,
                                 const std::function<double(double)>& f) {
  const EigenSystem es = eig_hermitian(m);
  RealVector mapped(es.eigenvalues.size());
  for (Eigen::Index k = 0; k < mapped.size(); ++k) {
    mapped[k] = f(es.eigenvalues[k]);
  }
  ComplexMatrix result = es.eigenvectors * mapped.asDiagonal() *
                         es.eigenvectors.adjoint();
  return HermitianOperator(std::move(result));
}

void require_positive(const HermitianOperator& m, const char* op) {
  const EigenSystem es = eig_hermitian(m);
  const double min_eig = es.eigenvalues[0];
  if (min_eig <= kPosDefFloor) {
    std::ostringstream os;
    os << op << ": operator is not strictly positive definite; smallest "
       << "eigenvalue " << min_eig << " <= " << kPosDefFloor;
    throw MathDomainError(os.str());
  }
}

}  // namespace

HermitianOperator matrix_exp(const HermitianOperator& m) {
  return apply_spectral(m, [](double x) { return std::exp(x); });
}

HermitianOperator matrix_log(const HermitianOperator& m) {
  require_positive(m, "matrix_log");
  return apply_spectral(m, [](double x) { return std::log(x); });
}

HermitianOperator matrix_inverse_shifted(const HermitianOperator& m,
                                         double shift) {
  if (!(shift >= 0.0)) {
    throw InvalidInput("matrix_inverse_shifted: shift must be >= 0");
  }
  if (shift == 0.0) {
    require_positive(m, "matrix_inverse_shifted");
  }
  return apply_spectral(m, [shift](double x) { return 1.0 / (x + shift); });
}

ComplexMatrix unitary_exp(const HermitianOperator& generator, double scale) {
  const EigenSystem es = eig_hermitian(generator);
  ComplexVector phases(es.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases[k] = std::exp(Complex(0.0, -scale * es.eigenvalues[k]));
  }
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

ComplexMatrix identity_matrix(Eigen::Index dim) {
  return ComplexMatrix::Identity(dim, dim);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Eigen::Index system_dim,
                            Eigen::Index environment_dim, Keep keep) {
  const Eigen::Index joint = system_dim * environment_dim;
  if (system_dim < 1 || environment_dim < 1 || m.rows() != joint ||
      m.cols() != joint) {
    std::ostringstream os;
    os << "partial_trace: matrix is " << m.rows() << "x" << m.cols()
       << " but factor dimensions are " << system_dim << " and "
       << environment_dim;
    throw InvalidInput(os.str());
  }
  if (keep == Keep::System) {
    ComplexMatrix out = ComplexMatrix::Zero(system_dim, system_dim);
    for (Eigen::Index s = 0; s < system_dim; ++s) {
      for (Eigen::Index t = 0; t < system_dim; ++t) {
        Complex sum = 0.0;
        for (Eigen::Index e = 0; e < environment_dim; ++e) {
          sum += m(s * environment_dim + e, t * environment_dim + e);
        }
        out(s, t) = sum;
      }
    }
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(environment_dim, environment_dim);
  for (Eigen::Index e = 0; e < environment_dim; ++e) {
    for (Eigen::Index f = 0; f < environment_dim; ++f) {
      Complex sum = 0.0;
      for (Eigen::Index s = 0; s < system_dim; ++s) {
        sum += m(s * environment_dim + e, s * environment_dim + f);
      }
      out(e, f) = sum;
    }
  }
  return out;
}

ComplexMatrix commutator(const HermitianOperator& a,
                         const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw InvalidInput("commutator: dimension mismatch");
  }
  return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

}  // namespace qwft
