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

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "ctoqw/lattice.hpp"
#include "ctoqw/model.hpp"

namespace ctoqw {

using Rng = std::mt19937_64;

/// Independent stream for path `index` of a run seeded with `seed`. Streams
/// depend only on (seed, index), never on scheduling.
Rng path_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform draw in the open interval (0, 1), bit-reproducible across platforms.
double uniform_open(Rng& rng);

inline constexpr long kMaxJumpsPerPath = 1'000'000;

struct JumpSample {
  /// Waiting time; +inf when no jump happens before the cap.
  double dt = std::numeric_limits<double>::infinity();
  int direction = 0;  // +1 right (A), -1 left (C), 0 no jump
  Matrix rho_after;   // post-jump internal state (unset without a jump)
  bool jumped() const { return direction != 0; }
};

/// Inter-jump machinery for one coin: e^{G0 t}, the survival function
/// Tr(e^{G0 t} rho e^{G0* t}) and inverse-transform sampling of jumps.
class JumpSampler {
 public:
  explicit JumpSampler(const Coin& coin);

  Matrix propagator(double t) const;
  double survival(const Matrix& rho, double t) const;
  /// -d/dt survival = Tr(K sigma_t), K = C*C + A*A.
  double hazard(const Matrix& rho, double t) const;

  /// Draws the next jump. When the survival does not fall below the drawn
  /// level before `cap`, returns a no-jump sample. With the default cap a
  /// missing jump is an error (trapped subspace) and throws NumericalError.
  JumpSample sample(const Matrix& rho, Rng& rng,
                    double cap = std::numeric_limits<double>::infinity()) const;

  const Coin& coin() const { return coin_; }

 private:
  double solve_survival(const Matrix& rho, double level, double cap) const;

  Coin coin_;
  Matrix g0_;
  Matrix k_;
  double max_rate_;
  bool diagonalizable_ = false;
  Matrix eig_vecs_;
  Matrix eig_vecs_inv_;
  Vector eig_vals_;
};

JumpSample sample_next_jump(const Coin& coin, const DensityMatrix& rho, Rng& rng);

struct TrajectoryPath {
  std::vector<double> jump_times;    // strictly increasing, all <= horizon
  std::vector<int> sites;            // sites[0] = X_0, sites[k] = X after jump k
  std::vector<DensityMatrix> states; // states[0] = rho_0, states[k] after jump k
  double horizon = 0.0;
  int final_site() const { return sites.back(); }
};

TrajectoryPath simulate_path(const Coin& coin, int i0, const DensityMatrix& rho0, double T,
                             Rng& rng);

/// Site at time T only; no per-jump records.
int simulate_endpoint(const JumpSampler& sampler, int i0, const Matrix& rho0, double T, Rng& rng);

struct DriftEstimate {
  double mean = 0.0;    // of X_T / T
  double std_error = 0.0;  // sample std / sqrt(n_paths)
  long n_paths = 0;
  double horizon = 0.0;
  std::uint64_t seed = 0;
};

/// Monte Carlo estimate of the asymptotic velocity. Requires T >= 100 and
/// n_paths >= 100. Results are identical for Serial and Parallel execution.
DriftEstimate estimate_drift(const Coin& coin, const DensityMatrix& rho0, double T, long n_paths,
                             std::uint64_t seed, Execution exec = Execution::Parallel);

/// Empirical distribution of X_t (site -> frequency) over n_paths paths from
/// site 0, on sites -M..M (entries outside are dropped). Parallel over paths.
std::vector<double> empirical_occupation(const Coin& coin, const DensityMatrix& rho0, double t,
                                         long n_paths, int M, std::uint64_t seed,
                                         Execution exec = Execution::Parallel);

}  // namespace ctoqw
