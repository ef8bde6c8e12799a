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

#include <optional>
#include <string>
#include <vector>

#include "ctoqw/model.hpp"

namespace ctoqw {

// The auxiliary Lindbladian acts on the internal space only:
//   L(rho) = -i[H, rho] - {C*C + A*A, rho}/2 + C rho C* + A rho A*.

Matrix apply_aux_lindblad(const Coin& coin, const Matrix& rho);

/// Heisenberg-picture dual, Tr(L(rho) X) = Tr(rho L*(X)).
Matrix apply_aux_adjoint(const Coin& coin, const Matrix& x);

/// d^2 x d^2 matrix of L on column-stacked vec(rho).
Matrix aux_superoperator(const Coin& coin);

struct StationaryAnalysis {
  /// Real dimension of the Hermitian part of ker L.
  int kernel_dim = 0;
  /// Present iff h1_holds.
  std::optional<DensityMatrix> rho_inv;
  /// Orthonormal (Hilbert-Schmidt) Hermitian basis of ker L.
  std::vector<Matrix> stationary_basis;
  /// Exactly one stationary density.
  bool h1_holds = false;
  /// Set when the kernel is one-dimensional but its element cannot be
  /// normalized to a state (trace ~ 0 or not PSD).
  bool degenerate = false;
  std::string diagnostic;
};

/// Throws NumericalError when the kernel is numerically empty.
StationaryAnalysis stationary_states(const Coin& coin, double rel_tol = kNullSpaceRelTol);

struct Drift {
  double m = 0.0;
};

/// m = Tr(A rho A*) - Tr(C rho C*). Throws NumericalError when rho_inv is
/// not stationary (||L(rho_inv)||_F > 1e-8).
Drift drift(const Coin& coin, const DensityMatrix& rho_inv);

struct DriftOperator {
  Matrix J;
  double residual = 0.0;
};

/// Least-squares solution of L*(J) = -(A*A - C*C - m I) under the gauge
/// Tr(gauge J) = 0 (traceless by default). J is Hermitian.
DriftOperator solve_drift_operator(const Coin& coin, double m);
DriftOperator solve_drift_operator(const Coin& coin, double m, const Matrix& gauge);

struct CommonEigenstructure {
  Matrix U;       // unitary, columns are the shared eigenvectors
  Vector c_diag;  // C U = U diag(c_diag)
  Vector a_diag;  // A U = U diag(a_diag)
};

/// Shared orthonormal eigenbasis of two commuting normal 2x2 matrices, or
/// nullopt when they are not simultaneously unitarily diagonalizable.
/// Throws ValidationError for d != 2.
std::optional<CommonEigenstructure> common_eigenstructure(const Matrix& c, const Matrix& a);

}  // namespace ctoqw
