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

#pragma once

#include <string>
#include <vector>

#include "ctoqw/classifier.hpp"
#include "ctoqw/model.hpp"

// Reference coins with known closed-form behaviour.
namespace ctoqw::fixtures {

/// C = diag(sqrt2, sqrt11), A = diag(-sqrt5, a), H = [[1, 1-2i], [1+2i, 1]].
/// Unique stationary state; recurrent iff |a| = 2 sqrt2.
Coin diagonal_pair(cplx a);

/// C and A share the eigenbasis u1 = (-i, 1)/sqrt2, u2 = (i, 1)/sqrt2 with
/// eigenvalues (1, c) and (a, 2). H = [[h1, h2], [conj h2, h3]].
Coin shared_basis(cplx a, cplx c, double h1, cplx h2, double h3);
Vector shared_basis_u1();
Vector shared_basis_u2();

/// C = [[-1, 1], [2y, 1]], A = [[1, 1], [y, 2]], H = [[0, ih], [-ih, 0]].
Coin two_param(double y, double h);
/// Closed-form drift of two_param(y, h).
double two_param_drift(double y, double h);
/// Closed-form drift of two_param(0, h).
double two_param_drift_y0(double h);
/// Zero-drift Hamiltonian strengths of two_param(1/2, .).
double two_param_root_minus();
double two_param_root_plus();

/// 3x3 coin C = [[c,0,0],[1,0,0],[0,0,1]], A = [[1,1,0],[0,0,1],[0,0,1]],
/// H = [[1,2,0],[2,0,0],[0,0,0]].
Coin three_level(double c);
/// Stationary state of three_level(0): (1/53) [[21, -19-2i, 0], [-19+2i, 32, 0], [0, 0, 0]].
Matrix three_level_c0_rho_inv();
/// diag(1/2, 1/2, 0), stationary state of three_level(1).
Matrix three_level_c1_rho_inv();
inline constexpr double kThreeLevelC0Drift = -6.0 / 53.0;

/// 1x1 coin (c), (a), H = (h): the classical birth-death walk.
Coin scalar(cplx a, cplx c, double h = 0.0);

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Deterministic built-in suite over the reference coins (stationary states,
/// drifts, verdicts). Runs in well under a second.
std::vector<Check> run_reference_suite();

}  // namespace ctoqw::fixtures
