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

#include <cmath>

#include "doctest.h"

#include "qwft/inequalities.hpp"
#include "qwft/suites.hpp"
#include "test_helpers.hpp"

using namespace qwft;
using namespace qwft::test;

namespace {

// Quadrature oracle for the resolvent double integral, independent of the
// closed-form eigenbasis route: Gauss-Legendre panels on [0, U] plus the
// exact tail via the substitution u -> 1/u (which maps the tail onto a
// smooth integral over [0, 1/U]).
ComplexMatrix resolvent_quadrature(const HermitianOperator& s,
                                   const HermitianOperator& t) {
  static const double nodes[] = {
      -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
      -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
      -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
      0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
      0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
      0.9894009349916499};
  static const double weights[] = {
      0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
      0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
      0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
      0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
      0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
      0.0271524594117541};

  const Eigen::Index d = s.dim();
  const ComplexMatrix id = identity_matrix(d);
  auto integrand_body = [&](double u) {
    const ComplexMatrix inv = (s.matrix() + u * id).inverse();
    return ComplexMatrix(inv * t.matrix() * inv);
  };
  auto integrand_tail = [&](double v) {
    // (S + 1/v)^-1 = v (v S + 1)^-1.
    const ComplexMatrix inv = (v * s.matrix() + id).inverse();
    return ComplexMatrix(inv * t.matrix() * inv);
  };
  const EigenSystem es = eig_hermitian(s);
  const double cut = es.eigenvalues[es.eigenvalues.size() - 1];

  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  // Log-spaced panels on [0, cut] resolve the small-eigenvalue region.
  std::vector<double> edges = {0.0};
  for (double lo = es.eigenvalues[0] * 1e-3; lo < cut; lo *= 2.0) {
    edges.push_back(lo);
  }
  edges.push_back(cut);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    for (int k = 0; k < 16; ++k) {
      const double u = 0.5 * (a + b) + 0.5 * (b - a) * nodes[k];
      total += 0.5 * (b - a) * weights[k] * integrand_body(u);
    }
  }
  // Tail: int_cut^inf du -> int_0^{1/cut} dv of the smooth substitution.
  const double vmax = 1.0 / cut;
  const int tail_panels = 8;
  for (int p = 0; p < tail_panels; ++p) {
    const double a = vmax * p / tail_panels;
    const double b = vmax * (p + 1) / tail_panels;
    for (int k = 0; k < 16; ++k) {
      const double v = 0.5 * (a + b) + 0.5 * (b - a) * nodes[k];
      total += 0.5 * (b - a) * weights[k] * integrand_tail(v);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("peierls_bogoliubov_gap: saturation and strictness") {
  Rng rng(101);
  const HermitianOperator a = random_hermitian(3, rng);

  // B = c 1 saturates: the probe gap vanishes.
  const InequalityProbe shift =
      peierls_bogoliubov_gap(a, HermitianOperator(0.7 * identity_matrix(3)));
  CHECK(std::abs(shift.gap) <= 1e-10 * std::max(1.0, shift.rhs));

  // Non-commuting strictness: A = ln gibbs(sigma_z), B = sigma_x.
  const HermitianOperator log_rho =
      matrix_log(HermitianOperator(gibbs_state(HermitianOperator(sigma_z()),
                                               1.0)
                                       .matrix()));
  const InequalityProbe strict =
      peierls_bogoliubov_gap(log_rho, HermitianOperator(sigma_x()));
  CHECK(strict.gap > 1e-6);

  // Commuting but non-constant B: strictly positive by scalar Jensen on the
  // eigenvalues (oracle computed directly).
  ComplexMatrix da(2, 2), db(2, 2);
  da << 0.3, 0, 0, -0.6;
  db << 1.1, 0, 0, -0.4;
  const InequalityProbe commuting =
      peierls_bogoliubov_gap(HermitianOperator(da), HermitianOperator(db));
  const double tr_ea = std::exp(0.3) + std::exp(-0.6);
  const double mean_b =
      (std::exp(0.3) * 1.1 + std::exp(-0.6) * -0.4) / tr_ea;
  const double lhs_oracle = tr_ea * std::exp(mean_b);
  const double rhs_oracle = std::exp(0.3 + 1.1) + std::exp(-0.6 - 0.4);
  CHECK(commuting.lhs == doctest::Approx(lhs_oracle).epsilon(1e-12));
  CHECK(commuting.rhs == doctest::Approx(rhs_oracle).epsilon(1e-12));
  CHECK(commuting.gap > 0.0);
}

TEST_CASE("lieb_trace_function: closed forms") {
  Rng rng(103);
  const HermitianOperator a = random_positive(3, rng, 0.1, 2.0);
  CHECK(lieb_trace_function(a, HermitianOperator(ComplexMatrix::Zero(3, 3))) ==
        doctest::Approx(a.matrix().trace().real()).epsilon(1e-12));

  const HermitianOperator l = random_hermitian(3, rng);
  const ComplexMatrix exp_l = matrix_exp(l).matrix();
  CHECK(lieb_trace_function(HermitianOperator(identity_matrix(3)), l) ==
        doctest::Approx(exp_l.trace().real()).epsilon(1e-12));

  // Commuting diagonal case: sum_k a_k e^{l_k}.
  ComplexMatrix ad(2, 2), ld(2, 2);
  ad << 0.5, 0, 0, 1.5;
  ld << -0.3, 0, 0, 0.8;
  CHECK(lieb_trace_function(HermitianOperator(ad), HermitianOperator(ld)) ==
        doctest::Approx(0.5 * std::exp(-0.3) + 1.5 * std::exp(0.8))
            .epsilon(1e-12));

  CHECK_THROWS_AS(
      lieb_trace_function(HermitianOperator(ComplexMatrix::Zero(2, 2)),
                          HermitianOperator(sigma_z())),
      MathDomainError);
}

TEST_CASE("concavity_probe: degenerate and random cases") {
  Rng rng(107);
  const HermitianOperator a = random_positive(3, rng, 0.1, 1.5);
  const HermitianOperator b = random_positive(3, rng, 0.1, 1.5);
  const HermitianOperator l = random_hermitian(3, rng);

  CHECK(std::abs(concavity_probe(a, a, 0.4, l).gap) < 1e-10);
  CHECK(std::abs(concavity_probe(a, b, 0.0, l).gap) < 1e-10);
  CHECK(std::abs(concavity_probe(a, b, 1.0, l).gap) < 1e-10);

  for (int i = 0; i < 500; ++i) {
    Rng probe_rng(mix_seed(2000 + i));
    const Eigen::Index dim = 2 + probe_rng.uniform_int(0, 2);
    const InequalityProbe probe = concavity_probe(
        random_positive(dim, probe_rng, 0.05, 2.0),
        random_positive(dim, probe_rng, 0.05, 2.0), probe_rng.uniform(),
        random_hermitian(dim, probe_rng));
    REQUIRE(probe.gap >= -1e-9 * std::max(1.0, std::abs(probe.rhs)));
  }
}

TEST_CASE("resolvent_double_integral: identities and quadrature oracle") {
  Rng rng(109);

  // S = T = rho gives the identity.
  const DensityOperator rho = random_density(3, rng);
  const HermitianOperator s_rho(rho.matrix());
  CHECK(matrix_close(resolvent_double_integral(s_rho, s_rho).matrix(),
                     identity_matrix(3), 1e-10));

  // S = 1: the integral of (1+u)^-2 is 1, leaving T.
  const HermitianOperator t = random_hermitian(3, rng);
  CHECK(matrix_close(
      resolvent_double_integral(HermitianOperator(identity_matrix(3)), t)
          .matrix(),
      t.matrix(), 1e-10));

  // Against the quadrature oracle, including nearly degenerate spectra.
  for (int i = 0; i < 10; ++i) {
    Rng pair_rng(mix_seed(300 + i));
    const Eigen::Index dim = 2 + pair_rng.uniform_int(0, 2);
    const HermitianOperator s = random_positive(dim, pair_rng, 0.2, 2.0);
    const HermitianOperator tt = random_hermitian(dim, pair_rng);
    CHECK(max_abs(resolvent_double_integral(s, tt).matrix() -
                  resolvent_quadrature(s, tt)) <= 1e-6);
  }

  CHECK_THROWS_AS(resolvent_double_integral(HermitianOperator(sigma_z()),
                                            HermitianOperator(sigma_x())),
                  MathDomainError);
}

TEST_CASE("lgt_gap: collapses and random probes") {
  Rng rng(113);
  const HermitianOperator t = random_positive(3, rng, 0.1, 1.5);
  const HermitianOperator r = random_positive(3, rng, 0.1, 1.5);

  // S = T collapses both sides to tr R.
  const InequalityProbe collapse = lgt_gap(t, r, t);
  CHECK(collapse.lhs == doctest::Approx(r.matrix().trace().real())
                            .epsilon(1e-10));
  CHECK(collapse.rhs == doctest::Approx(r.matrix().trace().real())
                            .epsilon(1e-10));

  // All three commuting: scalar identity per eigenvalue, gap = 0.
  ComplexMatrix td(2, 2), rd(2, 2), sd(2, 2);
  td << 0.5, 0, 0, 1.2;
  rd << 0.8, 0, 0, 0.3;
  sd << 0.9, 0, 0, 0.4;
  const InequalityProbe commuting = lgt_gap(
      HermitianOperator(td), HermitianOperator(rd), HermitianOperator(sd));
  CHECK(std::abs(commuting.gap) < 1e-10);

  for (int i = 0; i < 500; ++i) {
    Rng probe_rng(mix_seed(4000 + i));
    const Eigen::Index dim = 2 + probe_rng.uniform_int(0, 2);
    const InequalityProbe probe =
        lgt_gap(random_positive(dim, probe_rng, 0.05, 2.0),
                random_positive(dim, probe_rng, 0.05, 2.0),
                random_positive(dim, probe_rng, 0.05, 2.0));
    REQUIRE(probe.gap >= -1e-9 * std::max(1.0, std::abs(probe.rhs)));
  }
}

TEST_CASE("stinespring: dilations reproduce their channels") {
  Rng rng(127);

  // Identity channel: trivial dilation.
  const StinespringDilation trivial = stinespring(identity_channel(2));
  CHECK(trivial.environment_dim == 1);
  const DensityOperator probe = random_density(2, rng);
  CHECK(matrix_close(trivial.joint_unitary.matrix() * probe.matrix() *
                         trivial.joint_unitary.matrix().adjoint(),
                     probe.matrix(), 1e-12));

  // Reset and mixture channels round-trip through the dilation.
  const HermitianOperator h{sigma_z()};
  for (const QuantumChannel& channel :
       {mixture_reset_channel(h, 1.0, 1.0),
        mixture_reset_channel(h, 1.0, 0.5)}) {
    const StinespringDilation dilation = stinespring(channel);
    CHECK(dilation.environment_dim >=
          static_cast<Eigen::Index>(channel.kraus_operators().size()));
    for (int i = 0; i < 100; ++i) {
      const DensityOperator rho = random_density(2, rng);
      const ComplexMatrix lifted =
          dilation.joint_unitary.matrix() *
          kron(rho.matrix(), dilation.environment_state.matrix()) *
          dilation.joint_unitary.matrix().adjoint();
      const ComplexMatrix reduced =
          partial_trace(lifted, 2, dilation.environment_dim, Keep::System);
      CHECK(max_abs(reduced - apply_channel(channel, rho).matrix()) <= 1e-9);
    }
  }
}

TEST_CASE("lifted_work_identity_check: known and random scenarios") {
  Rng rng(131);
  const HermitianOperator h_a = random_hermitian(2, rng);
  const HermitianOperator h_b = random_hermitian(2, rng);
  const double beta = 1.1;

  // Identity channel with H_C = H_B: the second identity is exact.
  {
    const LiftedIdentityResidual residual = lifted_work_identity_check(
        random_density(2, rng), identity_channel(2), h_a, h_b, h_b, beta);
    CHECK(residual.second <= 1e-10);
    CHECK(residual.first <= 1e-8);
  }

  // rho_i = rho_A with a full reset.
  {
    const LiftedIdentityResidual residual = lifted_work_identity_check(
        gibbs_state(h_a, beta), mixture_reset_channel(h_b, beta, 1.0), h_a,
        h_b, random_hermitian(2, rng), beta);
    CHECK(residual.first <= 1e-8);
    CHECK(residual.second <= 1e-8);
  }

  // Random qubit scenarios with mixture channels.
  for (int i = 0; i < 200; ++i) {
    Rng sc_rng(mix_seed(6000 + i));
    const HermitianOperator a = random_hermitian(2, sc_rng);
    const HermitianOperator b = random_hermitian(2, sc_rng);
    const HermitianOperator c = random_hermitian(2, sc_rng);
    const double sc_beta = sc_rng.uniform(0.2, 3.0);
    const LiftedIdentityResidual residual = lifted_work_identity_check(
        random_density(2, sc_rng),
        mixture_reset_channel(b, sc_beta, sc_rng.uniform(0.05, 1.0)), a, b, c,
        sc_beta);
    REQUIRE(residual.first <= 1e-8);
    REQUIRE(residual.second <= 1e-8);
  }

  // A channel that is not Gibbs-preserving for H_B is rejected.
  CHECK_THROWS_AS(
      lifted_work_identity_check(random_density(2, rng),
                                 mixture_reset_channel(h_a, beta, 1.0),
                                 h_a, HermitianOperator(sigma_x()),
                                 h_b, beta),
      PreconditionError);
}

TEST_CASE("composition check: estimator equals the lifted-trace route") {
  // sum_i p_i exp(tr[rho_i (ln rho_B - ln rho_A)]) with
  // rho_B = exp(-beta U^dag H_T U)/Z_T and rho_A = gibbs(H_0) equals
  // estimator * exp(beta dF), and stays <= 1. The matrix-log route loses
  // precision once Gibbs eigenvalues hit the eps floor, so the two-route
  // comparison uses spectra with bounded beta * spread (the inequality
  // itself is property-tested on the unrestricted suite elsewhere).
  for (int i = 0; i < 100; ++i) {
    Rng rng(mix_seed(7000 + i));
    const Eigen::Index dim = 2 + rng.uniform_int(0, 2);
    const HermitianOperator h0 = random_positive(dim, rng, -1.0, 1.0);
    const HermitianOperator ht = random_positive(dim, rng, -1.0, 1.0);
    const double beta = rng.uniform(0.1, 5.0);
    const UnitaryOperator u = haar_unitary(dim, rng);
    const Decomposition decomposition = decompose_via_povm(
        purify(gibbs_state(h0, beta)),
        random_povm(dim, rng.uniform_int(1, 6), rng));
    const WorkReport report = work_report(decomposition, u, h0, ht, beta);

    const HermitianOperator evolved(u.matrix().adjoint() * ht.matrix() *
                                    u.matrix());
    const HermitianOperator log_b(
        matrix_log(HermitianOperator(gibbs_state(evolved, beta).matrix()))
            .matrix());
    const HermitianOperator log_a(
        matrix_log(HermitianOperator(gibbs_state(h0, beta).matrix()))
            .matrix());
    const ComplexMatrix diff = log_b.matrix() - log_a.matrix();
    double lifted = 0.0;
    for (const auto& entry : decomposition.entries) {
      lifted += entry.probability *
                std::exp(checked_real((entry.state.matrix() * diff).trace(),
                                      max_abs(diff)));
    }
    const double direct = report.estimator * std::exp(beta * report.delta_f);
    REQUIRE(lifted <= 1.0 + 1e-9);
    REQUIRE(std::abs(lifted - direct) <= 1e-10 * std::max(1.0, direct));
  }
}
