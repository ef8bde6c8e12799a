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

#include "ctoqw/classifier.hpp"
#include "ctoqw/error.hpp"
#include "ctoqw/fixtures.hpp"
#include "support/test_support.hpp"

using namespace ctoqw;
using ctoqw::testing::Gen;

namespace {

Coin scaled(const Coin& coin, double s) {
  return Coin::validate(std::sqrt(s) * coin.C(), std::sqrt(s) * coin.A(), s * coin.H());
}

// 2x2 coin diagonal in the basis u with the given eigenvalues and a random H.
Coin diagonal_in(const Matrix& u, cplx c1, cplx c2, cplx a1, cplx a2, const Matrix& h) {
  Matrix c = Matrix::Zero(2, 2), a = Matrix::Zero(2, 2);
  c(0, 0) = c1;
  c(1, 1) = c2;
  a(0, 0) = a1;
  a(1, 1) = a2;
  return Coin::validate(u * c * u.adjoint(), u * a * u.adjoint(), h);
}

}  // namespace

TEST_CASE("reference suite passes") {
  for (const auto& check : fixtures::run_reference_suite()) {
    INFO(check.name << ": " << check.detail);
    CHECK(check.passed);
  }
}

TEST_CASE("rule tags") {
  const auto r = classify(fixtures::diagonal_pair(2.0 * std::sqrt(2.0)));
  CHECK(r.verdict == Verdict::Recurrent);
  CHECK(r.rule == rule::kUniqueZeroDrift);
  CHECK(r.h1);
  REQUIRE(r.m);
  CHECK(std::abs(*r.m) < 1e-12);

  const auto t = classify(fixtures::three_level(0.0));
  CHECK(t.rule == rule::kUniqueNonzeroDrift);
  REQUIRE(t.m);
  CHECK(std::abs(*t.m + 6.0 / 53.0) < 1e-12);

  const auto p = classify(fixtures::shared_basis(2.0, 2.0, 1.0, cplx(0.0, 0.5), 1.0));
  CHECK(p.rule == rule::kDim2Partial);
  CHECK_FALSE(p.m);
  CHECK(to_string(Verdict::PartiallyRecurrent) == "PartiallyRecurrent");
}

TEST_CASE("verdicts are invariant under time rescaling") {
  Gen g(41);
  for (int trial = 0; trial < 60; ++trial) {
    const Coin coin = trial % 3 == 0 ? fixtures::two_param(0.0, 4.0 / 3.0) : testing::random_coin(2 + trial % 2, g);
    const double s = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(g));
    const auto r1 = classify(coin);
    const auto r2 = classify(scaled(coin, s));
    CHECK(r1.verdict == r2.verdict);
    CHECK(r1.rule == r2.rule);
    if (r1.m && r2.m) CHECK(std::abs(*r2.m - s * *r1.m) < 1e-9 * std::max(1.0, std::abs(s * *r1.m)));
  }
}

TEST_CASE("verdicts are invariant under a change of internal basis") {
  Gen g(42);
  const Coin coins[] = {fixtures::two_param(0.5, fixtures::two_param_root_plus()), fixtures::three_level(1.0),
                        fixtures::three_level(0.0), fixtures::shared_basis(1.0, 1.0, 1.0, cplx(0.0, 0.5), 1.0),
                        fixtures::shared_basis(3.0, 3.0, 1.0, cplx(0.0, 0.5), 1.0)};
  for (const Coin& coin : coins) {
    for (int k = 0; k < 5; ++k) {
      const Matrix u = testing::random_unitary(coin.dim(), g);
      const auto r1 = classify(coin);
      const auto r2 = classify(testing::conjugate_coin(coin, u));
      CHECK(r1.verdict == r2.verdict);
      if (r1.transient_state) {
        REQUIRE(r2.transient_state);
        const Matrix moved = u * r1.transient_state->matrix() * u.adjoint();
        CHECK((r2.transient_state->matrix() - moved).norm() < 1e-8);
      }
    }
  }
}

TEST_CASE("classify and classify_diagonal agree on diagonalizable 2x2 coins") {
  Gen g(43);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  int unique = 0, multi = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix u = testing::random_unitary(2, g);
    cplx c1 = testing::gaussian(g), c2 = testing::gaussian(g);
    cplx a1 = testing::gaussian(g), a2 = testing::gaussian(g);
    // Force balanced channels often enough to hit every branch.
    if (trial % 4 == 1) a1 = std::abs(c1) * std::polar(1.0, phase(g));
    if (trial % 4 == 2) a2 = std::abs(c2) * std::polar(1.0, phase(g));
    if (trial % 8 == 3) {
      a1 = std::abs(c1) * std::polar(1.0, phase(g));
      a2 = std::abs(c2) * std::polar(1.0, phase(g));
    }
    Matrix h;
    if (trial % 2 == 0) {
      h = testing::random_hermitian(2, g);
    } else {
      Matrix hd = Matrix::Zero(2, 2);
      hd(0, 0) = testing::gaussian(g).real();
      hd(1, 1) = testing::gaussian(g).real();
      h = u * hd * u.adjoint();
    }
    // Balanced-on-average unique-state coins: tune |a|^2 sums to match |c|^2 sums.
    if (trial % 10 == 0) {
      const double target = std::norm(c1) + std::norm(c2) - std::norm(a1);
      if (target > 0.0) a2 = std::sqrt(target);
    }
    const Coin coin = diagonal_in(u, c1, c2, a1, a2, 0.5 * (h + h.adjoint()));
    const auto full = classify(coin);
    const auto diag = classify_diagonal(coin);
    INFO("trial " << trial << " rule " << full.rule << " / " << diag.rule);
    CHECK(full.verdict == diag.verdict);
    if (full.h1) {
      ++unique;
      CHECK(diag.rule == rule::kDiagonalUnique);
      REQUIRE(full.m);
      REQUIRE(diag.m);
      CHECK(std::abs(*full.m - *diag.m) < 1e-9);
    } else {
      ++multi;
    }
  }
  CHECK(unique > 20);
  CHECK(multi > 20);
}

TEST_CASE("classify_diagonal preconditions") {
  CHECK_THROWS_AS(classify_diagonal(fixtures::three_level(0.0)), ValidationError);
  CHECK_THROWS_AS(classify_diagonal(fixtures::two_param(0.5, 0.1)), ValidationError);
}

TEST_CASE("higher dimension without a unique stationary state is undetermined") {
  Matrix c = Matrix::Identity(3, 3);
  c(2, 2) = 2.0;
  Matrix a = Matrix::Identity(3, 3);
  a(2, 2) = 0.5;
  const auto r = classify(Coin::validate(c, a, Matrix::Zero(3, 3)));
  CHECK(r.verdict == Verdict::Undetermined);
  CHECK(r.kernel_dim == 5);
  CHECK_FALSE(r.diagnostic.empty());
}

TEST_CASE("boundary tolerance") {
  // Off the zero-drift root by much more than the tolerance: transient.
  const double h = fixtures::two_param_root_plus();
  CHECK(classify(fixtures::two_param(0.5, h + 1e-6)).verdict == Verdict::Transient);
  CHECK(classify(fixtures::two_param(0.5, h)).verdict == Verdict::Recurrent);
}
