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

#include <string>

#include "qwft/openthermo.hpp"

// Numerical verification of the trace-inequality toolbox behind the work
// bounds: Peierls-Bogoliubov, Lieb concavity of A -> tr exp(ln A + L), the
// Lieb-Golden-Thompson triple with its closed-form resolvent integral,
// Stinespring dilations, and the lifted-trace identities used in the
// open-system argument.

namespace qwft {

inline constexpr double kProbeTolRel = 1e-9;
// Eigenvalue floor applied before taking logs of rank-deficient lifted
// states; the flooring magnitude is reported alongside the residuals.
inline constexpr double kLiftedStateFloor = 1e-13;

// One evaluated inequality instance, lhs <= rhs. Construction enforces
// gap >= -kProbeTolRel * max(1, |rhs|).
struct InequalityProbe {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // rhs - lhs
  std::string inputs_digest;
};

InequalityProbe make_probe(double lhs, double rhs, std::string digest);

// Digest helper for probe provenance (dimension + content hash).
std::string matrix_digest(std::initializer_list<const ComplexMatrix*> inputs);

// lhs = tr[e^A] e^<B>, rhs = tr[e^(A+B)], <B> = tr[e^A B]/tr[e^A].
InequalityProbe peierls_bogoliubov_gap(const HermitianOperator& a,
                                       const HermitianOperator& b);

// tr exp(ln A + L) for strictly positive A.
double lieb_trace_function(const HermitianOperator& a_positive,
                           const HermitianOperator& l);

// Concavity of the Lieb trace function in its positive argument:
// lhs = lam F[A1] + (1-lam) F[A2], rhs = F[lam A1 + (1-lam) A2].
InequalityProbe concavity_probe(const HermitianOperator& a1,
                                const HermitianOperator& a2, double lam,
                                const HermitianOperator& l);

// Closed form of int_0^inf du (S+u)^-1 T (S+u)^-1 in the S-eigenbasis:
// element (j,k) = T_jk ln(s_j/s_k)/(s_j - s_k), diagonal T_jj/s_j.
HermitianOperator resolvent_double_integral(const HermitianOperator& s,
                                            const HermitianOperator& t);

// Triple inequality: tr e^(ln T + ln R - ln S) <= tr[R * resolvent(S, T)].
InequalityProbe lgt_gap(const HermitianOperator& t, const HermitianOperator& r,
                        const HermitianOperator& s);

struct StinespringDilation {
  UnitaryOperator joint_unitary;      // on system (x) environment
  DensityOperator environment_state;  // pure, |0><0|
  Eigen::Index environment_dim = 0;
};

// Dilation with environment dimension equal to the Kraus rank; the isometry
// V|psi>|0> = sum_j K_j|psi>|j> is completed to a unitary deterministically.
StinespringDilation stinespring(const QuantumChannel& channel);

struct LiftedIdentityResidual {
  double first = 0.0;    // tr_S vs tr_SE identity for the pre-damping stroke
  double second = 0.0;   // tr_S vs tr_SE identity for the post-damping stroke
  double floored_mass = 0.0;  // eigenvalue mass raised to the floor
};

// Checks the two lifted trace identities behind the open-system proof using
// the Stinespring dilation of the damping channel. The channel must be
// Gibbs-preserving for (h_b, beta). The rank-deficient lifted states are
// floored at kLiftedStateFloor (with renormalization) before taking logs, so
// the identities are enforced at 1e-8 rather than machine precision.
LiftedIdentityResidual lifted_work_identity_check(
    const DensityOperator& rho_i, const QuantumChannel& channel,
    const HermitianOperator& h_a, const HermitianOperator& h_b,
    const HermitianOperator& h_c, double beta);

}  // namespace qwft
