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

#include "ctoqw/auxiliary.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ctoqw/error.hpp"

namespace ctoqw {

namespace {

void require_dim(const Coin& coin, const Matrix& m, const char* what) {
  if (m.rows() != coin.dim() || m.cols() != coin.dim()) {
    std::ostringstream msg;
    msg << what << ": expected a " << coin.dim() << "x" << coin.dim() << " matrix, got " << m.rows()
        << "x" << m.cols();
    throw ValidationError(msg.str());
  }
}

// Hermitian d x d matrix <-> real vector of length 2 d^2 (real parts, then
// imaginary parts, column-stacked). The Euclidean product on the image is the
// Hilbert-Schmidt product Re Tr(X* Y).
Eigen::VectorXd to_real(const Matrix& x) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd out(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out(k) = x.data()[k].real();
    out(n + k) = x.data()[k].imag();
  }
  return out;
}

Matrix from_real(const Eigen::VectorXd& v, Eigen::Index d) {
  Matrix x(d, d);
  const Eigen::Index n = d * d;
  for (Eigen::Index k = 0; k < n; ++k) x.data()[k] = cplx(v(k), v(n + k));
  return 0.5 * (x + x.adjoint());
}

double frob(const Matrix& m) { return m.norm(); }

}  // namespace

Matrix apply_aux_lindblad(const Coin& coin, const Matrix& rho) {
  require_dim(coin, rho, "apply_aux_lindblad");
  const Matrix& c = coin.C();
  const Matrix& a = coin.A();
  const Matrix& h = coin.H();
  const Matrix k = coin.jump_rate_operator();
  return -kI * (h * rho - rho * h) - 0.5 * (k * rho + rho * k) + c * rho * c.adjoint() +
         a * rho * a.adjoint();
}

Matrix apply_aux_adjoint(const Coin& coin, const Matrix& x) {
  require_dim(coin, x, "apply_aux_adjoint");
  const Matrix& c = coin.C();
  const Matrix& a = coin.A();
  const Matrix& h = coin.H();
  const Matrix k = coin.jump_rate_operator();
  return kI * (h * x - x * h) - 0.5 * (k * x + x * k) + c.adjoint() * x * c +
         a.adjoint() * x * a;
}

Matrix aux_superoperator(const Coin& coin) {
  const Eigen::Index d = coin.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix& h = coin.H();
  const Matrix k = coin.jump_rate_operator();
  return superop_matrix({
      {-kI * h - 0.5 * k, id},
      {id, kI * h - 0.5 * k},
      {coin.C(), coin.C().adjoint()},
      {coin.A(), coin.A().adjoint()},
  });
}

StationaryAnalysis stationary_states(const Coin& coin, double rel_tol) {
  const Eigen::Index d = coin.dim();
  const Matrix s = aux_superoperator(coin);
  const std::vector<Vector> kernel = null_space(s, rel_tol);
  if (kernel.empty()) {
    throw NumericalError("stationary_states: numerically empty kernel (a CP-TP semigroup always "
                         "has a stationary state; the coin is likely badly scaled)");
  }

  // ker L is closed under adjoints, so the Hermitian and anti-Hermitian parts
  // of every kernel vector are again in the kernel.
  Eigen::MatrixXd herm(2 * d * d, 2 * static_cast<Eigen::Index>(kernel.size()));
  for (std::size_t j = 0; j < kernel.size(); ++j) {
    const Matrix x = unvec(kernel[j], d);
    herm.col(2 * j) = to_real(0.5 * (x + x.adjoint()));
    herm.col(2 * j + 1) = to_real((x - x.adjoint()) / (2.0 * kI));
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(herm, Eigen::ComputeThinU);
  const Eigen::VectorXd& sv = svd.singularValues();

  StationaryAnalysis out;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > 1e-8 * sv(0)) out.stationary_basis.push_back(from_real(svd.matrixU().col(k), d));
  }
  out.kernel_dim = static_cast<int>(out.stationary_basis.size());

  if (out.kernel_dim != 1) {
    std::ostringstream msg;
    msg << "stationary space has dimension " << out.kernel_dim;
    out.diagnostic = msg.str();
    return out;
  }

  const Matrix& x = out.stationary_basis.front();
  const double tr = x.trace().real();
  if (std::abs(tr) < 1e-10 * frob(x)) {
    out.degenerate = true;
    out.diagnostic = "one-dimensional kernel with trace-zero element";
    return out;
  }
  const Matrix rho = x / tr;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    out.degenerate = true;
    out.diagnostic = "one-dimensional kernel whose element is not positive semidefinite";
    return out;
  }
  out.rho_inv = DensityMatrix::from_matrix(rho);
  out.h1_holds = true;
  return out;
}

Drift drift(const Coin& coin, const DensityMatrix& rho_inv) {
  const Matrix& rho = rho_inv.matrix();
  const double scale = std::max(1.0, max_abs(coin.jump_rate_operator()));
  const double stat_residual = frob(apply_aux_lindblad(coin, rho));
  if (stat_residual > 1e-8 * scale) {
    std::ostringstream msg;
    msg << "drift: supplied state is not stationary (||L(rho)|| = " << stat_residual << ")";
    throw NumericalError(msg.str());
  }
  const cplx m = (coin.A() * rho * coin.A().adjoint()).trace() -
                 (coin.C() * rho * coin.C().adjoint()).trace();
  if (std::abs(m.imag()) > 1e-12 * scale) throw NumericalError("drift: complex drift value");
  return {m.real()};
}

DriftOperator solve_drift_operator(const Coin& coin, double m) {
  const Eigen::Index d = coin.dim();
  return solve_drift_operator(coin, m, Matrix::Identity(d, d));
}

DriftOperator solve_drift_operator(const Coin& coin, double m, const Matrix& gauge) {
  const Eigen::Index d = coin.dim();
  require_dim(coin, gauge, "solve_drift_operator");
  const Matrix id = Matrix::Identity(d, d);
  const Matrix& a = coin.A();
  const Matrix& c = coin.C();
  const Matrix rhs = -(a.adjoint() * a - c.adjoint() * c - m * id);

  // Dual superoperator in the vec representation is the conjugate transpose;
  // the extra row pins the gauge Tr(gauge J) = vec(gauge^T) . vec(J).
  const Matrix s_dual = aux_superoperator(coin).adjoint();
  const double weight = std::max(1.0, max_abs(s_dual));
  Matrix system(d * d + 1, d * d);
  system.topRows(d * d) = s_dual;
  system.row(d * d) = weight * vec(gauge.transpose()).transpose();
  Vector b(d * d + 1);
  b.head(d * d) = vec(rhs);
  b(d * d) = 0.0;

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(system);
  cod.setThreshold(1e-12);
  Matrix j = unvec(cod.solve(b), d);
  j = 0.5 * (j + j.adjoint());
  const cplx gauge_tr = gauge.trace();
  if (std::abs(gauge_tr) > 0.0) j -= ((gauge * j).trace() / gauge_tr).real() * id;

  DriftOperator out;
  out.residual = frob(apply_aux_adjoint(coin, j) - rhs);
  out.J = std::move(j);
  return out;
}

std::optional<CommonEigenstructure> common_eigenstructure(const Matrix& c, const Matrix& a) {
  if (c.rows() != 2 || c.cols() != 2 || a.rows() != 2 || a.cols() != 2) {
    throw ValidationError("common_eigenstructure: only 2x2 coins are supported");
  }
  constexpr double kTol = 1e-10;
  const double nc = frob(c);
  const double na = frob(a);
  const auto is_normal = [&](const Matrix& m, double n) {
    return frob(m * m.adjoint() - m.adjoint() * m) <= kTol * n * n;
  };
  if (!is_normal(c, nc) || !is_normal(a, na)) return std::nullopt;
  if (frob(c * a - a * c) > kTol * nc * na) return std::nullopt;

  const auto diagonal_in = [&](const Matrix& u) -> std::optional<CommonEigenstructure> {
    const Matrix dc = u.adjoint() * c * u;
    const Matrix da = u.adjoint() * a * u;
    const double off_c = std::abs(dc(0, 1)) + std::abs(dc(1, 0));
    const double off_a = std::abs(da(0, 1)) + std::abs(da(1, 0));
    if (off_c > 1e-8 * std::max(nc, 1e-300) && nc > 0) return std::nullopt;
    if (off_a > 1e-8 * std::max(na, 1e-300) && na > 0) return std::nullopt;
    return CommonEigenstructure{u, dc.diagonal(), da.diagonal()};
  };

  // A generic combination C + tau A has a simple spectrum whenever the pair
  // can be separated at all; several tau guard against accidental degeneracy.
  const std::array<double, 4> taus{std::numbers::sqrt2 - 1.0, std::numbers::pi / 7.0,
                                   std::numbers::e / 5.0, std::numbers::sqrt3 + 0.5};
  for (double tau : taus) {
    const Matrix mix = c + tau * a;
    Eigen::ComplexEigenSolver<Matrix> es(mix);
    if (es.info() != Eigen::Success) continue;
    const Vector& lam = es.eigenvalues();
    if (std::abs(lam(0) - lam(1)) <= 1e-8 * (nc + tau * na)) continue;
    Vector u0 = es.eigenvectors().col(0).normalized();
    Vector u1 = es.eigenvectors().col(1);
    u1 -= u0.dot(u1) * u0;  // Eigen's dot conjugates the left operand
    u1.normalize();
    Matrix u(2, 2);
    u.col(0) = u0;
    u.col(1) = u1;
    if (auto found = diagonal_in(u)) return found;
  }
  // Every combination degenerate: both matrices are multiples of the identity.
  return diagonal_in(Matrix::Identity(2, 2));
}

}  // namespace ctoqw
