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
#include <span>
#include <vector>

#include "ctoqw/kernels.hpp"
#include "ctoqw/model.hpp"

namespace ctoqw {

enum class Execution { Serial, Parallel };

/// Mass that may reach the truncation boundary before a result is trusted.
inline constexpr double kLeakTol = 1e-8;

/// Block-diagonal state sum_i rho(i) (x) |i><i| restricted to sites -M..M.
struct BlockState {
  int M = 0;
  double time = 0.0;
  std::vector<Matrix> blocks;  // blocks[i + M] = rho_t(i)
  double leaked_mass = 0.0;    // probability absorbed at the boundary so far

  const Matrix& at(int site) const { return blocks.at(static_cast<std::size_t>(site + M)); }
  double trace_at(int site) const { return at(site).trace().real(); }
  double retained_trace() const;
  /// Smallest eigenvalue over all blocks.
  double min_eigenvalue() const;
};

/// Truncated generator of the walk on sites -M..M with absorbing boundary:
///   d/dt rho(i) = G0 rho(i) + rho(i) G0* + A rho(i-1) A* + C rho(i+1) C*.
class BlockGenerator {
 public:
  BlockGenerator(const Coin& coin, int M);

  int M() const { return M_; }
  int n_sites() const { return 2 * M_ + 1; }
  Eigen::Index dim() const { return coin_.dim(); }
  const Coin& coin() const { return coin_; }
  /// Complex unknowns in the block array.
  Eigen::Index state_size() const { return n_sites() * dim() * dim(); }

  /// Block derivative. `in` and `out` hold state_size() entries, no aliasing.
  void apply(std::span<const cplx> in, std::span<cplx> out,
             Execution exec = Execution::Parallel) const;
  /// Rate at which mass crosses the boundary: Tr(A rho(M) A*) + Tr(C rho(-M) C*).
  double outflow_rate(std::span<const cplx> in) const;
  /// Dense (state_size()+1)^2 matrix of the generator; the last coordinate is
  /// the leaked mass.
  Matrix dense() const;

 private:
  Coin coin_;
  int M_;
  Matrix g0_, g0_adj_, a_adj_, c_adj_;
  Matrix a_out_, c_out_;  // A*A and C*C, for the boundary flux
};

inline BlockGenerator build_block_generator(const Coin& coin, int M) { return {coin, M}; }

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  Execution exec = Execution::Parallel;
  /// Use the dense exponential when state_size() + 1 is at most this.
  Eigen::Index dense_limit = 160;
};

/// Continuation-friendly evolution: advance_to() may be called repeatedly
/// with increasing times, reusing the integrator state. Holds a pointer to
/// `gen`, which must outlive it.
class LatticeEvolution {
 public:
  LatticeEvolution(const BlockGenerator& gen, const DensityMatrix& rho0, int i0,
                   IntegratorOptions opts = {});

  void advance_to(double t);
  double time() const { return time_; }
  double leaked_mass() const { return y_(y_.size() - 1).real(); }
  double trace_at(int site) const;
  Matrix block(int site) const;
  BlockState state() const;
  bool uses_dense() const { return dense_; }
  long steps_taken() const { return steps_; }

 private:
  void advance_rk(double t_end);
  void advance_dense(double dt);

  const BlockGenerator* gen_;
  IntegratorOptions opts_;
  bool dense_;
  double time_ = 0.0;
  Vector y_;  // blocks followed by the leaked mass
  double h_ = 0.0;
  long steps_ = 0;
  // Dense path
  Matrix generator_;
  double cached_dt_ = -1.0;
  Matrix cached_prop_;
  // RK path
  std::vector<Vector> k_;
  bool fsal_valid_ = false;
};

/// Pilot-run truncation: smallest M (doubling from a diffusive guess) whose
/// boundary leakage up to `horizon` stays below leak_tol.
int auto_truncation(const Coin& coin, const DensityMatrix& rho0, double horizon,
                    double leak_tol = kLeakTol);

BlockState evolve(const BlockGenerator& gen, const DensityMatrix& rho0, int i0, double t,
                  IntegratorOptions opts = {});

/// p_{j i0; rho}(t) = Tr rho_t(j).
double transition_probability(const BlockGenerator& gen, const DensityMatrix& rho0, int i0, int j,
                              double t, IntegratorOptions opts = {});

/// rho_beta(k) / Tr rho_beta(k). Throws NumericalError when Tr < 1e-12.
DensityMatrix conditioned_state(const BlockGenerator& gen, const DensityMatrix& rho0, int i0,
                                int k, double beta, IntegratorOptions opts = {});

/// |p_{j i0}(alpha + beta) - sum_k p_{jk; rho'_k}(alpha) p_{k i0}(beta)| with
/// rho'_k the state conditioned on site k at time beta.
double chapman_kolmogorov_residual(const BlockGenerator& gen, const DensityMatrix& rho0, int i0,
                                   int j, double alpha, double beta, IntegratorOptions opts = {});

struct ReturnIntegral {
  double value = 0.0;             // integral over [0, T]
  double step = 0.0;              // effective Simpson step
  std::vector<double> times;      // uniform grid 0..T
  std::vector<double> p;          // p_{ii}(t) on the grid
  std::vector<double> cumulative; // integral up to times[2n], n = 0..N/2
  double leaked_mass = 0.0;
  /// Integral up to the largest even grid point <= t.
  double up_to(double t) const;
};

/// Composite Simpson integral of p_{i0 i0; rho}(t) over [0, T]. Throws
/// NumericalError when boundary leakage exceeds kLeakTol before T.
ReturnIntegral return_integral_series(const BlockGenerator& gen, const DensityMatrix& rho0, int i0,
                                      double T, double quad_step, IntegratorOptions opts = {});
double return_integral(const BlockGenerator& gen, const DensityMatrix& rho0, int i0, double T,
                       double quad_step, IntegratorOptions opts = {});

struct SkeletonSeries {
  double delta = 0.0;
  std::vector<double> p;             // p_{j i0}(n delta), n = 0..N
  std::vector<double> partial_sums;  // sum_{m <= n}
  double leaked_mass = 0.0;
  double value() const { return partial_sums.back(); }
};

/// Partial sums of the delta-skeleton series sum_n p_{j i0; rho}(n delta).
SkeletonSeries skeleton_series(const BlockGenerator& gen, const DensityMatrix& rho0, int i0, int j,
                               double delta, int N, IntegratorOptions opts = {});
double skeleton_sum(const BlockGenerator& gen, const DensityMatrix& rho0, int i0, int j,
                    double delta, int N, IntegratorOptions opts = {});

}  // namespace ctoqw
