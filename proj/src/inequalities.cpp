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

#include "qwft/inequalities.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace qwft {

InequalityProbe make_probe(double lhs, double rhs, std::string digest) {
  InequalityProbe probe{lhs, rhs, rhs - lhs, std::move(digest)};
  const double tol = kProbeTolRel * std::max(1.0, std::abs(rhs));
  if (probe.gap < -tol) {
    std::ostringstream os;
    os << "inequality probe violated: lhs " << lhs << " > rhs " << rhs
       << " beyond tolerance " << tol << " (" << probe.inputs_digest << ")";
    throw InequalityViolation(os.str());
  }
  return probe;
}

namespace {

std::uint64_t fnv1a_bytes(const void* data, std::size_t size,
                          std::uint64_t hash) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

double real_trace(const ComplexMatrix& m, double scale) {
  return checked_real(m.trace(), scale);
}

}  // namespace

std::string matrix_digest(std::initializer_list<const ComplexMatrix*> inputs) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  Eigen::Index dim = 0;
  for (const ComplexMatrix* m : inputs) {
    dim = std::max(dim, m->rows());
    for (Eigen::Index j = 0; j < m->rows(); ++j) {
      for (Eigen::Index k = 0; k < m->cols(); ++k) {
        const Complex value = (*m)(j, k);
        double parts[2] = {value.real(), value.imag()};
        hash = fnv1a_bytes(parts, sizeof(parts), hash);
      }
    }
  }
  std::ostringstream os;
  os << "dim=" << dim << ";fnv=" << std::hex << hash;
  return os.str();
}

InequalityProbe peierls_bogoliubov_gap(const HermitianOperator& a,
                                       const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw InvalidInput("peierls_bogoliubov_gap: dimension mismatch");
  }
  const ComplexMatrix exp_a = matrix_exp(a).matrix();
  const double tr_exp_a = real_trace(exp_a, max_abs(exp_a));
  const double mean_b =
      checked_real((exp_a * b.matrix()).trace(),
                   max_abs(exp_a) * std::max(1.0, max_abs(b.matrix()))) /
      tr_exp_a;
  const double lhs = tr_exp_a * std::exp(mean_b);
  const ComplexMatrix exp_ab =
      matrix_exp(HermitianOperator(a.matrix() + b.matrix())).matrix();
  const double rhs = real_trace(exp_ab, max_abs(exp_ab));
  return make_probe(lhs, rhs, matrix_digest({&a.matrix(), &b.matrix()}));
}

double lieb_trace_function(const HermitianOperator& a_positive,
                           const HermitianOperator& l) {
  if (a_positive.dim() != l.dim()) {
    throw InvalidInput("lieb_trace_function: dimension mismatch");
  }
  const HermitianOperator log_a = matrix_log(a_positive);  // domain check
  const ComplexMatrix value =
      matrix_exp(HermitianOperator(log_a.matrix() + l.matrix())).matrix();
  return real_trace(value, max_abs(value));
}

InequalityProbe concavity_probe(const HermitianOperator& a1,
                                const HermitianOperator& a2, double lam,
                                const HermitianOperator& l) {
  if (!(lam >= 0.0 && lam <= 1.0)) {
    throw InvalidInput("concavity_probe: lambda must lie in [0, 1]");
  }
  const double lhs =
      lam * lieb_trace_function(a1, l) + (1.0 - lam) * lieb_trace_function(a2, l);
  const HermitianOperator mix(lam * a1.matrix() + (1.0 - lam) * a2.matrix());
  const double rhs = lieb_trace_function(mix, l);
  return make_probe(lhs, rhs,
                    matrix_digest({&a1.matrix(), &a2.matrix(), &l.matrix()}));
}

HermitianOperator resolvent_double_integral(const HermitianOperator& s,
                                            const HermitianOperator& t) {
  if (s.dim() != t.dim()) {
    throw InvalidInput("resolvent_double_integral: dimension mismatch");
  }
  const EigenSystem es = eig_hermitian(s);
  if (es.eigenvalues[0] <= kPosDefFloor) {
    std::ostringstream os;
    os << "resolvent_double_integral: S is not strictly positive (smallest "
       << "eigenvalue " << es.eigenvalues[0] << ")";
    throw MathDomainError(os.str());
  }
  const ComplexMatrix t_tilde =
      es.eigenvectors.adjoint() * t.matrix() * es.eigenvectors;
  const Eigen::Index d = s.dim();
  ComplexMatrix r_tilde(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double sj = es.eigenvalues[j];
      const double sk = es.eigenvalues[k];
      const double delta = sj - sk;
      const double sigma = sj + sk;
      // ln(sj/sk)/(sj-sk) written as 2 atanh(delta/sigma)/delta, which is
      // stable for nearly degenerate eigenvalues; the limit value is 1/sj.
      const double quotient =
          (delta == 0.0) ? 1.0 / sj : 2.0 * std::atanh(delta / sigma) / delta;
      r_tilde(j, k) = t_tilde(j, k) * quotient;
    }
  }
  return HermitianOperator(es.eigenvectors * r_tilde *
                           es.eigenvectors.adjoint());
}

InequalityProbe lgt_gap(const HermitianOperator& t, const HermitianOperator& r,
                        const HermitianOperator& s) {
  const HermitianOperator log_t = matrix_log(t);
  const HermitianOperator log_r = matrix_log(r);
  const HermitianOperator log_s = matrix_log(s);
  const ComplexMatrix lhs_matrix =
      matrix_exp(HermitianOperator(log_t.matrix() + log_r.matrix() -
                                   log_s.matrix()))
          .matrix();
  const double lhs = real_trace(lhs_matrix, max_abs(lhs_matrix));
  const HermitianOperator resolvent = resolvent_double_integral(s, t);
  const double rhs =
      checked_real((r.matrix() * resolvent.matrix()).trace(),
                   max_abs(r.matrix()) * std::max(1.0, max_abs(resolvent.matrix())));
  return make_probe(lhs, rhs,
                    matrix_digest({&t.matrix(), &r.matrix(), &s.matrix()}));
}

StinespringDilation stinespring(const QuantumChannel& channel) {
  const Eigen::Index d = channel.dim();
  const Eigen::Index rank =
      static_cast<Eigen::Index>(channel.kraus_operators().size());
  const Eigen::Index joint = d * rank;

  // Prescribed columns: U (|psi> (x) |0>) = sum_j K_j|psi> (x) |j>.
  ComplexMatrix u = ComplexMatrix::Zero(joint, joint);
  for (Eigen::Index col = 0; col < d; ++col) {
    for (Eigen::Index j = 0; j < rank; ++j) {
      const ComplexMatrix& k = channel.kraus_operators()[j];
      for (Eigen::Index s = 0; s < d; ++s) {
        u(s * rank + j, col * rank + 0) = k(s, col);
      }
    }
  }
  // Complete the remaining columns by Gram-Schmidt over the canonical basis,
  // in input order, with one re-orthogonalization pass.
  std::vector<Eigen::Index> filled;
  for (Eigen::Index col = 0; col < d; ++col) filled.push_back(col * rank);
  Eigen::Index candidate = 0;
  for (Eigen::Index col = 0; col < joint; ++col) {
    if (col % rank == 0) continue;  // prescribed column
    ComplexVector v = ComplexVector::Zero(joint);
    double norm = 0.0;
    while (candidate < joint) {
      v.setZero();
      v[candidate] = 1.0;
      ++candidate;
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index f : filled) {
          v -= (u.col(f).adjoint() * v).value() * u.col(f);
        }
      }
      norm = v.norm();
      if (norm > 1e-6) break;
    }
    if (norm <= 1e-6) {
      throw InvalidInput("stinespring: failed to complete the isometry");
    }
    u.col(col) = v / norm;
    filled.push_back(col);
  }

  ComplexMatrix env = ComplexMatrix::Zero(rank, rank);
  env(0, 0) = 1.0;
  return StinespringDilation{UnitaryOperator(std::move(u)),
                             DensityOperator(std::move(env)), rank};
}

namespace {

// Eigenvalue floor with renormalization; returns the log of the floored
// state and accumulates the raised mass.
HermitianOperator floored_log(const ComplexMatrix& rho, double floor,
                              double* floored_mass) {
  const EigenSystem es = eig_hermitian(HermitianOperator(rho));
  RealVector lifted(es.eigenvalues.size());
  double raised = 0.0;
  double total = 0.0;
  for (Eigen::Index k = 0; k < lifted.size(); ++k) {
    lifted[k] = std::max(es.eigenvalues[k], floor);
    raised += lifted[k] - es.eigenvalues[k];
    total += lifted[k];
  }
  *floored_mass += std::abs(raised);
  RealVector logs(lifted.size());
  for (Eigen::Index k = 0; k < lifted.size(); ++k) {
    logs[k] = std::log(lifted[k] / total);
  }
  return HermitianOperator(es.eigenvectors * logs.asDiagonal() *
                           es.eigenvectors.adjoint());
}

}  // namespace

LiftedIdentityResidual lifted_work_identity_check(
    const DensityOperator& rho_i, const QuantumChannel& channel,
    const HermitianOperator& h_a, const HermitianOperator& h_b,
    const HermitianOperator& h_c, double beta) {
  const Eigen::Index d = rho_i.dim();
  if (channel.dim() != d || h_a.dim() != d || h_b.dim() != d ||
      h_c.dim() != d) {
    throw InvalidInput("lifted_work_identity_check: dimension mismatch");
  }
  const double fixed_point = verify_gibbs_fixed_point(channel, h_b, beta);
  if (fixed_point > kGibbsFixedPointTol) {
    std::ostringstream os;
    os << "lifted_work_identity_check: channel is not Gibbs-preserving for "
       << "H_B (residual " << fixed_point << ")";
    throw PreconditionError(os.str());
  }

  const DensityOperator rho_a = gibbs_state(h_a, beta);
  const DensityOperator rho_b = gibbs_state(h_b, beta);
  const DensityOperator rho_c = gibbs_state(h_c, beta);

  const StinespringDilation dilation = stinespring(channel);
  const Eigen::Index de = dilation.environment_dim;
  const ComplexMatrix& u = dilation.joint_unitary.matrix();
  const auto lift = [&](const ComplexMatrix& rho) {
    return ComplexMatrix(u * kron(rho, dilation.environment_state.matrix()) *
                         u.adjoint());
  };
  const ComplexMatrix rho_ie = lift(rho_i.matrix());
  const ComplexMatrix rho_ae = lift(rho_a.matrix());
  const ComplexMatrix rho_be = lift(rho_b.matrix());

  LiftedIdentityResidual out;

  // First identity: tr_S[rho_i (ln rho_B - ln rho_A)] equals the lifted
  // trace against the unitarily evolved (rank-deficient) joint states.
  const ComplexMatrix diff_s =
      matrix_log(HermitianOperator(rho_b.matrix())).matrix() -
      matrix_log(HermitianOperator(rho_a.matrix())).matrix();
  const double lhs1 =
      checked_real((rho_i.matrix() * diff_s).trace(), max_abs(diff_s));
  const HermitianOperator log_be =
      floored_log(rho_be, kLiftedStateFloor, &out.floored_mass);
  const HermitianOperator log_ae =
      floored_log(rho_ae, kLiftedStateFloor, &out.floored_mass);
  const ComplexMatrix diff_se = log_be.matrix() - log_ae.matrix();
  const double rhs1 =
      checked_real((rho_ie * diff_se).trace(), max_abs(diff_se));
  out.first = std::abs(lhs1 - rhs1);

  // Second identity: tr_S[K[rho_i](ln rho_C - ln rho_B)] equals the lifted
  // trace against the full-rank trivial lifts rho_X (x) 1/d_E.
  const DensityOperator k_rho = apply_channel(channel, rho_i);
  const ComplexMatrix diff_cb =
      matrix_log(HermitianOperator(rho_c.matrix())).matrix() -
      matrix_log(HermitianOperator(rho_b.matrix())).matrix();
  const double lhs2 =
      checked_real((k_rho.matrix() * diff_cb).trace(), max_abs(diff_cb));
  const ComplexMatrix mixed_env = identity_matrix(de) / static_cast<double>(de);
  const ComplexMatrix log_c1 =
      matrix_log(HermitianOperator(kron(rho_c.matrix(), mixed_env))).matrix();
  const ComplexMatrix log_b1 =
      matrix_log(HermitianOperator(kron(rho_b.matrix(), mixed_env))).matrix();
  const ComplexMatrix diff_1 = log_c1 - log_b1;
  const double rhs2 =
      checked_real((rho_ie * diff_1).trace(), max_abs(diff_1));
  out.second = std::abs(lhs2 - rhs2);

  if (out.first > 1e-8 || out.second > 1e-8) {
    std::ostringstream os;
    os << "lifted trace identities violated: residuals " << out.first << ", "
       << out.second;
    throw InequalityViolation(os.str());
  }
  return out;
}

}  // namespace qwft
