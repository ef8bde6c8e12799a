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

#include "ctoqw/numkernel.hpp"

namespace ctoqw {

/// Hermitian defects below this are symmetrized silently.
inline constexpr double kHermitianSilentTol = 1e-10;
/// Defects in (silent, reject] are symmetrized with a warning; above, rejected.
inline constexpr double kHermitianRejectTol = 1e-6;

/// Homogeneous nearest-neighbour coin on Z: C drives left jumps (i -> i-1),
/// A drives right jumps (i -> i+1), H is the on-site Hamiltonian.
class Coin {
 public:
  /// Validates shapes and finiteness, symmetrizes H, rejects C = A = 0.
  static Coin validate(Matrix c, Matrix a, Matrix h);

  const Matrix& C() const { return c_; }
  const Matrix& A() const { return a_; }
  const Matrix& H() const { return h_; }
  Eigen::Index dim() const { return c_.rows(); }

  /// Largest entry of |H_in - H_in^*| / 2 removed by symmetrization.
  double hermitian_adjustment() const { return adjustment_; }
  /// True when the adjustment was large enough to warrant telling the user.
  bool adjustment_warning() const { return adjustment_ > kHermitianSilentTol; }

  /// C^*C + A^*A, the total jump-rate operator.
  Matrix jump_rate_operator() const;

 private:
  Coin(Matrix c, Matrix a, Matrix h, double adjustment)
      : c_(std::move(c)), a_(std::move(a)), h_(std::move(h)), adjustment_(adjustment) {}

  Matrix c_;
  Matrix a_;
  Matrix h_;
  double adjustment_ = 0.0;
};

inline Coin validate_coin(Matrix c, Matrix a, Matrix h) {
  return Coin::validate(std::move(c), std::move(a), std::move(h));
}

/// Trace-one positive semidefinite matrix.
class DensityMatrix {
 public:
  static constexpr double kTol = 1e-10;

  /// Validates Hermiticity, trace and spectrum against kTol; stores the
  /// Hermitian part.
  static DensityMatrix from_matrix(const Matrix& m, double tol = kTol);
  /// |v><v| / <v|v>.
  static DensityMatrix from_pure(const Vector& v);
  /// I / d.
  static DensityMatrix maximally_mixed(Eigen::Index d);

  const Matrix& matrix() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }

 private:
  explicit DensityMatrix(Matrix rho) : rho_(std::move(rho)) {}
  Matrix rho_;
};

inline DensityMatrix density_from_pure(const Vector& v) { return DensityMatrix::from_pure(v); }

struct EffectiveGenerator {
  Matrix G0;
};

/// G0 = -iH - (C^*C + A^*A)/2.
EffectiveGenerator build_G0(const Coin& coin);

}  // namespace ctoqw
