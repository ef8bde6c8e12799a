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

#include "ctoqw/numkernel.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "ctoqw/error.hpp"

namespace ctoqw {

namespace {

void require_square(const Matrix& m, const char* op) {
  if (m.rows() != m.cols()) {
    throw ValidationError(std::string(op) + ": matrix must be square, got " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermitian_defect(const Matrix& m) {
  require_square(m, "hermitian_defect");
  return max_abs(m - m.adjoint());
}

// Scaling-and-squaring with a Pade core (Eigen picks degree 3..13 from the norm).
Matrix mat_exp(const Matrix& m, double t) {
  require_square(m, "mat_exp");
  if (!all_finite(m) || !std::isfinite(t)) throw ValidationError("mat_exp: non-finite input");
  if (m.rows() == 0) return m;
  Matrix scaled = t * m;
  Matrix out = scaled.exp();
  if (!all_finite(out)) throw NumericalError("mat_exp: overflow in e^{tM}");
  return out;
}

HermitianEigen hermitian_eig(const Matrix& m) {
  require_square(m, "hermitian_eig");
  if (!all_finite(m)) throw ValidationError("hermitian_eig: non-finite input");
  const double scale = std::max(1.0, max_abs(m));
  if (hermitian_defect(m) > 1e-10 * scale) {
    throw ValidationError("hermitian_eig: matrix is not Hermitian");
  }
  const Matrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eig: solver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<Vector> null_space(const Matrix& m, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ValidationError("null_space: rel_tol must lie in (0, 1)");
  if (!all_finite(m)) throw ValidationError("null_space: non-finite input");
  std::vector<Vector> basis;
  if (m.cols() == 0) return basis;

  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  const Matrix& v = svd.matrixV();
  for (Eigen::Index k = 0; k < m.cols(); ++k) {
    // Columns beyond min(rows, cols) have an implicit zero singular value.
    const double sigma = k < sv.size() ? sv(k) : 0.0;
    if (sigma_max == 0.0 || sigma < rel_tol * sigma_max) basis.emplace_back(v.col(k));
  }
  return basis;
}

Matrix superop_matrix(const std::vector<std::pair<Matrix, Matrix>>& left_right_pairs) {
  if (left_right_pairs.empty()) throw ValidationError("superop_matrix: no operator pairs");
  const Eigen::Index d = left_right_pairs.front().first.rows();
  Matrix s = Matrix::Zero(d * d, d * d);
  for (const auto& [left, right] : left_right_pairs) {
    if (left.rows() != d || left.cols() != d || right.rows() != d || right.cols() != d) {
      throw ValidationError("superop_matrix: all operators must be " + std::to_string(d) + "x" +
                            std::to_string(d));
    }
    s += Eigen::kroneckerProduct(right.transpose(), left).eval();
  }
  return s;
}

Vector vec(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) throw ValidationError("unvec: size is not dim^2");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

}  // namespace ctoqw
