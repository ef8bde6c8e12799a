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

#include "ctoqw/model.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "ctoqw/error.hpp"

namespace ctoqw {

Coin Coin::validate(Matrix c, Matrix a, Matrix h) {
  const Eigen::Index d = c.rows();
  if (d < 1) throw ValidationError("coin: dimension must be at least 1");
  for (const Matrix* m : {&c, &a, &h}) {
    if (m->rows() != d || m->cols() != d) {
      std::ostringstream msg;
      msg << "coin: C, A, H must all be " << d << "x" << d << ", got " << m->rows() << "x"
          << m->cols();
      throw ValidationError(msg.str());
    }
    if (!all_finite(*m)) throw ValidationError("coin: non-finite entry");
  }
  const double adjustment = 0.5 * hermitian_defect(h);
  if (adjustment > kHermitianRejectTol) {
    std::ostringstream msg;
    msg << "coin: H is not Hermitian (max |H - H*|/2 = " << adjustment << ")";
    throw ValidationError(msg.str());
  }
  Matrix h_sym = 0.5 * (h + h.adjoint());
  if (max_abs(c) == 0.0 && max_abs(a) == 0.0) {
    throw ValidationError("coin: C and A are both zero, the walk never moves");
  }
  return Coin(std::move(c), std::move(a), std::move(h_sym), adjustment);
}

Matrix Coin::jump_rate_operator() const {
  return c_.adjoint() * c_ + a_.adjoint() * a_;
}

DensityMatrix DensityMatrix::from_matrix(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) throw ValidationError("density: matrix must be square");
  if (!all_finite(m)) throw ValidationError("density: non-finite entry");
  if (hermitian_defect(m) > tol) throw ValidationError("density: matrix is not Hermitian");
  Matrix herm = 0.5 * (m + m.adjoint());
  const cplx tr = herm.trace();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream msg;
    msg << "density: trace is " << tr.real() << ", expected 1";
    throw ValidationError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol) {
    throw ValidationError("density: matrix has a negative eigenvalue");
  }
  return DensityMatrix(std::move(herm));
}

DensityMatrix DensityMatrix::from_pure(const Vector& v) {
  const double norm2 = v.squaredNorm();
  if (v.size() == 0 || norm2 == 0.0 || !std::isfinite(norm2)) {
    throw ValidationError("density: cannot build a state from a zero vector");
  }
  Matrix rho = v * v.adjoint() / norm2;
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index d) {
  if (d < 1) throw ValidationError("density: dimension must be at least 1");
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

EffectiveGenerator build_G0(const Coin& coin) {
  return {-kI * coin.H() - 0.5 * coin.jump_rate_operator()};
}

}  // namespace ctoqw
