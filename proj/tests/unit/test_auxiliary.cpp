// Copyright 2026 The ctoqw Authors
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

#include <doctest.h>

#include <cmath>

#include "ctoqw/auxiliary.hpp"
#include "ctoqw/error.hpp"
#include "ctoqw/fixtures.hpp"
#include "support/test_support.hpp"

using namespace ctoqw;
using ctoqw::testing::Gen;

TEST_CASE("aux Lindbladian: operator, superoperator and term-by-term agree") {
  Gen g(31);
  for (int d = 1; d <= 4; ++d) {
    const Coin coin = testing::random_coin(d, g);
    const Matrix x = testing::random_matrix(d, g);
    const Matrix ref = testing::lindblad_direct(coin, x);
    CHECK((apply_aux_lindblad(coin, x) - ref).norm() < 1e-12 * std::max(1.0, ref.norm()));
    CHECK((unvec(aux_superoperator(coin) * vec(x), d) - ref).norm() < 1e-12 * std::max(1.0, ref.norm()));
  }
}

TEST_CASE("aux Lindbladian annihilates traces and its dual fixes the identity") {
  Gen g(32);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 3;
    const Coin coin = testing::random_coin(d, g);
    const Matrix x = testing::random_matrix(d, g);
    const Matrix y = testing::random_matrix(d, g);
    CHECK(std::abs(apply_aux_lindblad(coin, x).trace()) < 1e-12);
    CHECK(apply_aux_adjoint(coin, Matrix::Identity(d, d)).norm() < 1e-12);
    // Tr(L(x) y) = Tr(x L*(y))
    const cplx lhs = (apply_aux_lindblad(coin, x) * y).trace();
    const cplx rhs = (x * apply_aux_adjoint(coin, y)).trace();
    CHECK(std::abs(lhs - rhs) < 1e-11);
  }
}

TEST_CASE("stationary state of the 3x3 reference coin") {
  const StationaryAnalysis sa = stationary_states(fixtures::three_level(0.0));
  CHECK(sa.h1_holds);
  CHECK(sa.kernel_dim == 1);
  REQUIRE(sa.rho_inv);
  CHECK((sa.rho_inv->matrix() - fixtures::three_level_c0_rho_inv()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(drift(fixtures::three_level(0.0), *sa.rho_inv).m + 6.0 / 53.0) < 1e-12);
}

TEST_CASE("commuting diagonal coins have a multi-dimensional kernel") {
  const Coin diag2 = fixtures::shared_basis(2.0, 2.0, 1.0, cplx(0.0, 0.5), 1.0);
  const StationaryAnalysis sa = stationary_states(diag2);
  CHECK(sa.kernel_dim == 2);
  CHECK_FALSE(sa.h1_holds);
  CHECK_FALSE(sa.rho_inv);
  REQUIRE(sa.stationary_basis.size() == 2);
  for (const Matrix& b : sa.stationary_basis) {
    CHECK(hermitian_defect(b) < 1e-12);
    CHECK(apply_aux_lindblad(diag2, b).norm() < 1e-10);
  }

  Matrix c = Matrix::Identity(3, 3);
  c(2, 2) = 2.0;
  const Coin diag3 = Coin::validate(c, c, Matrix::Zero(3, 3));
  // Entry (i, j) is in the kernel iff c_i = c_j: four pairs in the repeated block plus (2, 2).
  CHECK(stationary_states(diag3).kernel_dim == 5);
}

TEST_CASE("two-parameter family drift matches its rational closed form") {
  Gen g(33);
  std::uniform_real_distribution<double> uy(-0.8, 0.8), uh(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double y = uy(g);
    const double h = uh(g);
    const Coin coin = fixtures::two_param(y, h);
    const StationaryAnalysis sa = stationary_states(coin);
    REQUIRE(sa.rho_inv);
    CHECK(std::abs(drift(coin, *sa.rho_inv).m - fixtures::two_param_drift(y, h)) < 1e-10);
  }
}

TEST_CASE("drift equals the expectation of A*A - C*C in the stationary state") {
  // Tr(A rho A*) - Tr(C rho C*) = Tr(rho (A*A - C*C)) by cyclicity; the
  // second route never forms the jump terms.
  Gen g(34);
  for (int trial = 0; trial < 40; ++trial) {
    const Coin coin = testing::random_coin(2 + trial % 2, g);
    const StationaryAnalysis sa = stationary_states(coin);
    REQUIRE(sa.rho_inv);
    const Matrix w = coin.A().adjoint() * coin.A() - coin.C().adjoint() * coin.C();
    const double alt = (sa.rho_inv->matrix() * w).trace().real();
    CHECK(std::abs(drift(coin, *sa.rho_inv).m - alt) < 1e-11);
  }
}

TEST_CASE("drift operator solves the Poisson equation") {
  Gen g(35);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 2;
    const Coin coin = testing::random_coin(d, g);
    const StationaryAnalysis sa = stationary_states(coin);
    REQUIRE(sa.rho_inv);
    const double m = drift(coin, *sa.rho_inv).m;
    const DriftOperator op = solve_drift_operator(coin, m);
    const Matrix rhs = -(coin.A().adjoint() * coin.A() - coin.C().adjoint() * coin.C() -
                         m * Matrix::Identity(d, d));
    CHECK((apply_aux_adjoint(coin, op.J) - rhs).norm() < 1e-8);
    CHECK(op.residual < 1e-8);
    CHECK(hermitian_defect(op.J) < 1e-12);
    CHECK(std::abs(op.J.trace()) < 1e-10);

    // A different gauge shifts J by a multiple of the identity only.
    const Matrix gauge = sa.rho_inv->matrix();
    const DriftOperator op2 = solve_drift_operator(coin, m, gauge);
    const Matrix shift = op2.J - op.J;
    const cplx lambda = shift.trace() / static_cast<double>(d);
    CHECK((shift - lambda * Matrix::Identity(d, d)).norm() < 1e-8);
    CHECK(std::abs((gauge * op2.J).trace()) < 1e-10);
  }
}

TEST_CASE("drift refuses a non-stationary state") {
  const Coin coin = fixtures::three_level(0.0);
  CHECK_THROWS_AS(drift(coin, DensityMatrix::maximally_mixed(3)), NumericalError);
}

TEST_CASE("common eigenstructure of the shared-basis coin") {
  const Coin coin = fixtures::shared_basis(3.0, cplx(0.5, 1.0), 0.0, 0.0, 0.0);
  const auto ce = common_eigenstructure(coin.C(), coin.A());
  REQUIRE(ce);
  const Matrix& u = ce->U;
  CHECK((u.adjoint() * u - Matrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((coin.C() * u - u * ce->c_diag.asDiagonal()).norm() < 1e-12);
  CHECK((coin.A() * u - u * ce->a_diag.asDiagonal()).norm() < 1e-12);
  // Each column is u1 or u2 up to a phase.
  for (int k = 0; k < 2; ++k) {
    const double o1 = std::abs(fixtures::shared_basis_u1().dot(u.col(k)));
    const double o2 = std::abs(fixtures::shared_basis_u2().dot(u.col(k)));
    CHECK(std::abs(std::max(o1, o2) - 1.0) < 1e-12);
  }

  const Coin generic = fixtures::two_param(0.5, 0.3);
  CHECK_FALSE(common_eigenstructure(generic.C(), generic.A()));
  CHECK_THROWS_AS(common_eigenstructure(Matrix::Identity(3, 3), Matrix::Identity(3, 3)),
                  ValidationError);
}

TEST_CASE("two-parameter closed form is consistent with its specializations") {
  for (double h : {-1.5, 0.0, 0.5, 1.0, 4.0 / 3.0, 2.0}) {
    CHECK(std::abs(fixtures::two_param_drift(0.0, h) - fixtures::two_param_drift_y0(h)) < 1e-14);
  }
  CHECK(std::abs(fixtures::two_param_drift(0.5, fixtures::two_param_root_minus())) < 1e-13);
  CHECK(std::abs(fixtures::two_param_drift(0.5, fixtures::two_param_root_plus())) < 1e-13);
}
