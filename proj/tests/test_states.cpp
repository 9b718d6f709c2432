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

#include "qwft/states.hpp"
#include "qwft/suites.hpp"
#include "test_helpers.hpp"

using namespace qwft;
using namespace qwft::test;

namespace {

double von_neumann_entropy(const DensityOperator& rho) {
  const EigenSystem es = eig_hermitian(HermitianOperator(rho.matrix()));
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
    const double p = es.eigenvalues[k];
    if (p > 1e-15) s -= p * std::log(p);
  }
  return s;
}

}  // namespace

TEST_CASE("gibbs_state: closed forms and limits") {
  Rng rng(11);
  const HermitianOperator h = random_hermitian(3, rng);

  // beta = 0 and H = 0 are both maximally mixed.
  CHECK(matrix_close(gibbs_state(h, 0.0).matrix(), identity_matrix(3) / 3.0,
                     1e-12));
  CHECK(matrix_close(
      gibbs_state(HermitianOperator(ComplexMatrix::Zero(4, 4)), 2.5).matrix(),
      identity_matrix(4) / 4.0, 1e-12));

  // Closed form 1/(1 + e^{+-2 beta}) for sigma_z at beta = 1.
  const ComplexMatrix g = gibbs_state(HermitianOperator(sigma_z()), 1.0).matrix();
  CHECK(std::abs(g(0, 0).real() - 1.0 / (1.0 + std::exp(2.0))) < 1e-12);
  CHECK(std::abs(g(1, 1).real() - 1.0 / (1.0 + std::exp(-2.0))) < 1e-12);

  // Commutes with its Hamiltonian.
  const DensityOperator gh = gibbs_state(h, 1.7);
  CHECK(max_abs(commutator(HermitianOperator(gh.matrix()), h)) < 1e-10);

  // Overflow guard.
  ComplexMatrix wide(2, 2);
  wide << 500, 0, 0, -500;
  CHECK_THROWS_AS(gibbs_state(HermitianOperator(wide), 1.0), RangeError);
  CHECK_THROWS_AS(gibbs_state(h, -1.0), InvalidInput);
}

TEST_CASE("partition_function: closed forms") {
  CHECK(partition_function(HermitianOperator(sigma_z()), 1.0) ==
        doctest::Approx(2.0 * std::cosh(1.0)).epsilon(1e-13));
  CHECK(partition_function(HermitianOperator(ComplexMatrix::Zero(3, 3)), 2.0) ==
        doctest::Approx(3.0));
  Rng rng(13);
  CHECK(partition_function(random_hermitian(4, rng), 0.0) ==
        doctest::Approx(4.0));
}

TEST_CASE("purify: canonical purification and round trip") {
  // Pure state purifies to a product |0>_S (x) |env label>; with ascending
  // eigenvalue order the unit weight sits on the last environment index.
  ComplexMatrix pure = ComplexMatrix::Zero(2, 2);
  pure(0, 0) = 1.0;
  const Purification p0 = purify(DensityOperator(pure));
  CHECK(std::abs(std::abs(p0.joint_state[1]) - 1.0) < 1e-12);

  // Maximally mixed qubit purifies to a maximally entangled pair (Schmidt
  // coefficients 1/sqrt(2)).
  const Purification pm = purify(DensityOperator(identity_matrix(2) / 2.0));
  const ComplexMatrix rho_se = pm.joint_state * pm.joint_state.adjoint();
  const ComplexMatrix env = partial_trace(rho_se, 2, 2, Keep::Environment);
  CHECK(matrix_close(env, identity_matrix(2) / 2.0, 1e-12));

  // Thermal qubit: sqrt weights from the Gibbs closed form.
  const DensityOperator gz = gibbs_state(HermitianOperator(sigma_z()), 1.0);
  const Purification pg = purify(gz);
  const double w0 = 1.0 / (1.0 + std::exp(2.0));
  // Ascending eigenvalue order: the small weight comes first on |0>|0>.
  CHECK(std::abs(std::abs(pg.joint_state[0]) - std::sqrt(w0)) < 1e-12);
  CHECK(std::abs(std::abs(pg.joint_state[3]) - std::sqrt(1.0 - w0)) < 1e-12);

  // Round trip within 1e-10 on random states.
  Rng rng(19);
  for (int i = 0; i < 50; ++i) {
    const DensityOperator rho = random_density(2 + rng.uniform_int(0, 2), rng);
    const Purification p = purify(rho);
    const ComplexMatrix joint = p.joint_state * p.joint_state.adjoint();
    CHECK(max_abs(partial_trace(joint, p.system_dim, p.environment_dim,
                                Keep::System) -
                  rho.matrix()) <= 1e-10);
  }
}

TEST_CASE("decompose_via_povm: trivial, Schmidt-projective, and +/- POVMs") {
  const DensityOperator rho0 = gibbs_state(HermitianOperator(sigma_z()), 1.0);
  const Purification psi = purify(rho0);

  // Identity POVM: the trivial decomposition.
  const Decomposition trivial =
      decompose_via_povm(psi, POVM({identity_matrix(2)}));
  CHECK(trivial.entries.size() == 1);
  CHECK(trivial.entries[0].probability == doctest::Approx(1.0));
  CHECK(matrix_close(trivial.entries[0].state.matrix(), rho0.matrix(), 1e-12));

  // Projective POVM in the environment Schmidt basis reproduces the
  // eigendecomposition of rho_0.
  std::vector<ComplexMatrix> projectors;
  for (int k = 0; k < 2; ++k) {
    const ComplexVector e = basis_vector(2, k);
    projectors.push_back(e * e.adjoint());
  }
  const Decomposition eigen = decompose_via_povm(psi, POVM(projectors));
  const EigenSystem es = eig_hermitian(HermitianOperator(rho0.matrix()));
  REQUIRE(eigen.entries.size() == 2);
  for (int k = 0; k < 2; ++k) {
    CHECK(eigen.entries[k].probability ==
          doctest::Approx(es.eigenvalues[k]).epsilon(1e-12));
    const ComplexVector v = es.eigenvectors.col(k);
    CHECK(matrix_close(eigen.entries[k].state.matrix(), v * v.adjoint(),
                       1e-10));
  }

  // |+>/<-| measurement gives two non-orthogonal states mixing to rho_0.
  ComplexVector plus(2), minus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  const Decomposition pm = decompose_via_povm(
      psi, POVM({plus * plus.adjoint(), minus * minus.adjoint()}));
  REQUIRE(pm.entries.size() == 2);
  const Complex overlap =
      (pm.entries[0].state.matrix() * pm.entries[1].state.matrix()).trace();
  CHECK(std::abs(overlap) > 0.1);  // genuinely non-orthogonal
  ComplexMatrix mixture = ComplexMatrix::Zero(2, 2);
  for (const auto& e : pm.entries) {
    mixture += e.probability * e.state.matrix();
  }
  CHECK(max_abs(mixture - rho0.matrix()) <= 1e-9);

  CHECK_THROWS_AS(decompose_via_povm(psi, POVM({identity_matrix(3)})),
                  InvalidInput);
}

TEST_CASE("decompose_via_povm: mixture invariant over random POVMs") {
  Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    const Eigen::Index dim = 2 + rng.uniform_int(0, 2);
    const DensityOperator rho0 =
        gibbs_state(random_hermitian(dim, rng), rng.uniform(0.1, 5.0));
    const Purification psi = purify(rho0);
    const POVM povm = random_povm(dim, rng.uniform_int(1, 6), rng);
    const Decomposition d = decompose_via_povm(psi, povm);
    ComplexMatrix mixture = ComplexMatrix::Zero(dim, dim);
    double total = 0.0;
    for (const auto& e : d.entries) {
      mixture += e.probability * e.state.matrix();
      total += e.probability;
    }
    REQUIRE(std::abs(total - 1.0) <= 1e-12);
    REQUIRE(max_abs(mixture - rho0.matrix()) <= 1e-9);
  }
}

TEST_CASE("gibbs_state maximizes entropy at fixed mean energy") {
  Rng rng(29);
  const HermitianOperator h = random_hermitian(2, rng);
  const double beta = 1.3;
  const DensityOperator gibbs = gibbs_state(h, beta);
  const double e_target =
      checked_real((gibbs.matrix() * h.matrix()).trace(), 1.0);
  const double s_gibbs = von_neumann_entropy(gibbs);

  int binding = 0;
  for (int i = 0; i < 10000; ++i) {
    DensityOperator rho = random_density(2, rng);
    if (i % 2 == 1) {
      // Mix a candidate pair across the target energy so the 1e-3 window is
      // guaranteed to be populated.
      const DensityOperator other = random_density(2, rng);
      const double e1 = checked_real((rho.matrix() * h.matrix()).trace(), 1.0);
      const double e2 =
          checked_real((other.matrix() * h.matrix()).trace(), 1.0);
      if (std::abs(e2 - e1) > 1e-12) {
        const double alpha = std::clamp((e_target - e2) / (e1 - e2), 0.0, 1.0);
        rho = DensityOperator(alpha * rho.matrix() +
                              (1.0 - alpha) * other.matrix());
      }
    }
    const double energy = checked_real((rho.matrix() * h.matrix()).trace(), 1.0);
    if (std::abs(energy - e_target) > 1e-3) continue;
    ++binding;
    // Allow for the energy window: dS <= beta * dE.
    REQUIRE(von_neumann_entropy(rho) <= s_gibbs + beta * 1e-3 + 1e-12);
  }
  CHECK(binding > 100);  // the window must actually be exercised
}

TEST_CASE("haar_unitary: determinism, phases, first moment") {
  // dim 1: a unit-modulus phase.
  const UnitaryOperator u1 = haar_unitary(1, 77);
  CHECK(std::abs(std::abs(u1.matrix()(0, 0)) - 1.0) < 1e-12);

  // Fixed seed twice: identical matrices.
  const UnitaryOperator a = haar_unitary(3, 1234);
  const UnitaryOperator b = haar_unitary(3, 1234);
  CHECK(max_abs(a.matrix() - b.matrix()) == 0.0);

  // First Haar moment: the entrywise mean over 10^4 samples vanishes within
  // 3 sigma of the Monte Carlo error (entry variance is 1/dim).
  Rng rng(4242);
  const int samples = 10000;
  ComplexMatrix mean = ComplexMatrix::Zero(3, 3);
  for (int i = 0; i < samples; ++i) {
    mean += haar_unitary(3, rng).matrix();
  }
  mean /= static_cast<double>(samples);
  const double three_sigma = 3.0 * std::sqrt(1.0 / 3.0 / samples);
  for (Eigen::Index r = 0; r < 3; ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) {
      CHECK(std::abs(mean(r, c).real()) < three_sigma);
      CHECK(std::abs(mean(r, c).imag()) < three_sigma);
    }
  }
}

TEST_CASE("random_povm: completeness, trivial case, projective flag") {
  CHECK(random_povm(3, 1, 5).elements().size() == 1);
  CHECK(matrix_close(random_povm(3, 1, 5).elements()[0], identity_matrix(3),
                     1e-10));

  Rng rng(37);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Index dim = 2 + rng.uniform_int(0, 2);
    const POVM povm = random_povm(dim, rng.uniform_int(1, 6), rng);
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (const auto& e : povm.elements()) sum += e;
    CHECK(max_abs(sum - identity_matrix(dim)) <= 1e-10);
  }

  // Projective flag: rank-1 pairwise-orthogonal projectors.
  const POVM proj = random_povm(3, 3, 9, true);
  for (int i = 0; i < 3; ++i) {
    const ComplexMatrix& a = proj.elements()[i];
    CHECK(max_abs(a * a - a) < 1e-10);  // idempotent
    CHECK(std::abs(a.trace() - Complex(1.0, 0.0)) < 1e-10);  // rank 1
    for (int j = i + 1; j < 3; ++j) {
      CHECK(max_abs(a * proj.elements()[j]) < 1e-10);
    }
  }
  CHECK_THROWS_AS(random_povm(3, 2, 1, true), InvalidInput);
}

TEST_CASE("validation: density, unitary, POVM, decomposition invariants") {
  ComplexMatrix not_normalized(2, 2);
  not_normalized << 0.7, 0, 0, 0.7;
  CHECK_THROWS_AS(DensityOperator{not_normalized}, InvalidInput);

  ComplexMatrix indefinite(2, 2);
  indefinite << 1.4, 0, 0, -0.4;
  CHECK_THROWS_AS(DensityOperator{indefinite}, InvalidInput);

  CHECK_THROWS_AS(UnitaryOperator{2.0 * identity_matrix(2)}, InvalidInput);

  CHECK_THROWS_AS(POVM{{0.5 * identity_matrix(2)}}, InvalidInput);

  const DensityOperator rho = gibbs_state(HermitianOperator(sigma_z()), 1.0);
  Decomposition bad{{{0.5, rho}}, rho, false, 0.0};
  CHECK_THROWS_AS(validate_decomposition(bad), InvalidInput);
}
