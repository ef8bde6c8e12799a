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

#include "ctoqw/classifier.hpp"

#include <cmath>
#include <sstream>

#include "ctoqw/error.hpp"

namespace ctoqw {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Recurrent: return "Recurrent";
    case Verdict::Transient: return "Transient";
    case Verdict::PartiallyRecurrent: return "PartiallyRecurrent";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

namespace {

struct Normalized {
  Coin coin;
  double scale;  // ||C||^2 + ||A||^2 of the original coin
};

// Rescaling time by s = ||C||^2 + ||A||^2 multiplies L by 1/s: same kernel,
// same verdict, drift divided by s.
Normalized normalize(const Coin& coin) {
  const double s = coin.C().squaredNorm() + coin.A().squaredNorm();
  const double r = std::sqrt(s);
  return {Coin::validate(coin.C() / r, coin.A() / r, coin.H() / s), s};
}

bool close(double x, double y) { return std::abs(x - y) <= kClassifyTol; }

// Case of a 2x2 coin whose auxiliary Lindbladian has several stationary states.
void classify_multi_dim2(const Coin& norm, ClassificationResult& out) {
  const auto ce = common_eigenstructure(norm.C(), norm.A());
  if (!ce) {
    out.verdict = Verdict::Undetermined;
    out.diagnostic = "several stationary states but C and A share no orthonormal eigenbasis "
                     "at tolerance";
    return;
  }
  const Matrix h_u = ce->U.adjoint() * norm.H() * ce->U;
  const double h2 = std::abs(h_u(0, 1));
  const Vector& a = ce->a_diag;
  const Vector& c = ce->c_diag;

  if (h2 > kClassifyTol) {
    if (std::abs(a(0) - a(1)) > kClassifyTol || std::abs(c(0) - c(1)) > kClassifyTol) {
      out.verdict = Verdict::Undetermined;
      out.diagnostic = "inconsistent input: off-diagonal H in the common eigenbasis "
                       "with several stationary states, yet C or A is not scalar";
      return;
    }
    out.verdict = close(std::abs(a(0)), std::abs(c(0))) ? Verdict::Recurrent : Verdict::Transient;
    out.rule = rule::kDim2ScalarCoin;
    return;
  }

  const bool eq0 = close(std::abs(a(0)), std::abs(c(0)));
  const bool eq1 = close(std::abs(a(1)), std::abs(c(1)));
  if (!eq0 && !eq1) {
    out.verdict = Verdict::Transient;
    out.rule = rule::kDim2AllTransient;
  } else if (eq0 && eq1) {
    out.verdict = Verdict::Recurrent;
    out.rule = rule::kDim2AllRecurrent;
  } else {
    const Eigen::Index j = eq0 ? 1 : 0;
    out.verdict = Verdict::PartiallyRecurrent;
    out.rule = rule::kDim2Partial;
    out.transient_state = DensityMatrix::from_pure(ce->U.col(j));
  }
}

std::string describe_invariant_candidates(const std::vector<Matrix>& basis) {
  std::ostringstream msg;
  msg << "no criterion covers d >= 3 without a unique stationary state; kernel_dim = "
      << basis.size() << "; stationary basis element (positive rank, negative rank):";
  for (const Matrix& x : basis) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
    const double tol = 1e-8 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    int pos = 0;
    int neg = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
      if (es.eigenvalues()(k) > tol) ++pos;
      if (es.eigenvalues()(k) < -tol) ++neg;
    }
    msg << " (" << pos << "," << neg << ")";
  }
  return msg.str();
}

}  // namespace

ClassificationResult classify(const Coin& coin) {
  const Normalized n = normalize(coin);
  const StationaryAnalysis sa = stationary_states(n.coin);

  ClassificationResult out;
  out.kernel_dim = sa.kernel_dim;
  out.h1 = sa.h1_holds;

  if (sa.h1_holds) {
    const double m_scaled = drift(n.coin, *sa.rho_inv).m;
    out.m = m_scaled * n.scale;
    if (std::abs(m_scaled) <= kClassifyTol) {
      out.verdict = Verdict::Recurrent;
      out.rule = rule::kUniqueZeroDrift;
    } else {
      out.verdict = Verdict::Transient;
      out.rule = rule::kUniqueNonzeroDrift;
    }
    return out;
  }
  if (sa.degenerate) {
    out.numerically_degenerate = true;
    out.diagnostic = sa.diagnostic;
    return out;
  }
  if (coin.dim() == 2) {
    classify_multi_dim2(n.coin, out);
    return out;
  }
  out.diagnostic = describe_invariant_candidates(sa.stationary_basis);
  return out;
}

ClassificationResult classify_diagonal(const Coin& coin) {
  if (coin.dim() != 2) throw ValidationError("classify_diagonal: coin must be 2x2");
  const Normalized n = normalize(coin);
  const auto ce = common_eigenstructure(n.coin.C(), n.coin.A());
  if (!ce) throw ValidationError("classify_diagonal: C and A are not diagonal in a common basis");

  const StationaryAnalysis sa = stationary_states(n.coin);
  ClassificationResult out;
  out.kernel_dim = sa.kernel_dim;
  out.h1 = sa.h1_holds;
  if (sa.h1_holds) {
    // I/2 is always stationary for commuting normal C, A; uniqueness makes it rho_inv.
    const double m_scaled =
        0.5 * (ce->a_diag.squaredNorm() - ce->c_diag.squaredNorm());
    out.m = m_scaled * n.scale;
    out.rule = rule::kDiagonalUnique;
    out.verdict = std::abs(m_scaled) <= kClassifyTol ? Verdict::Recurrent : Verdict::Transient;
    return out;
  }
  if (sa.degenerate) {
    out.numerically_degenerate = true;
    out.diagnostic = sa.diagnostic;
    return out;
  }
  classify_multi_dim2(n.coin, out);
  return out;
}

}  // namespace ctoqw
