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

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ctoqw {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Default relative singular-value cutoff used to decide what counts as kernel.
inline constexpr double kNullSpaceRelTol = 1e-10;

/// e^{tM}. Throws ValidationError for non-square or non-finite input.
Matrix mat_exp(const Matrix& m, double t);

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // orthonormal columns, vectors.col(k) pairs with values(k)
};

/// Spectral decomposition of a Hermitian matrix. The input is symmetrized
/// first; anything further than 1e-10 (relative) from Hermitian is rejected.
HermitianEigen hermitian_eig(const Matrix& m);

/// Orthonormal basis of the right kernel of `m`: right singular vectors whose
/// singular value is below rel_tol * sigma_max.
std::vector<Vector> null_space(const Matrix& m, double rel_tol = kNullSpaceRelTol);

/// Matrix of rho -> sum_k L_k rho R_k acting on column-stacked vec(rho),
/// i.e. sum_k (R_k^T kron L_k).
Matrix superop_matrix(const std::vector<std::pair<Matrix, Matrix>>& left_right_pairs);

/// Column-stacking vectorization and its inverse.
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, Eigen::Index dim);

bool all_finite(const Matrix& m);

/// Max-abs entry; used for the entry-wise tolerances throughout.
double max_abs(const Matrix& m);

/// max |m - m^*| entry-wise (zero for Hermitian input).
double hermitian_defect(const Matrix& m);

}  // namespace ctoqw
