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

#include "ctoqw/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ctoqw/error.hpp"

namespace ctoqw {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Runs fn(p) for p = 0..n-1. Any exception inside the parallel region is
// captured and rethrown as NumericalError after the loop.
template <class Fn>
void for_each_path(long n, Execution exec, Fn&& fn) {
  if (exec == Execution::Serial) {
    for (long p = 0; p < n; ++p) fn(p);
    return;
  }
  bool failed = false;
  std::string failure;
#pragma omp parallel for schedule(dynamic, 4)
  for (long p = 0; p < n; ++p) {
    try {
      fn(p);
    } catch (const std::exception& e) {
#pragma omp critical(ctoqw_path_failure)
      {
        if (!failed) failure = e.what();
        failed = true;
      }
    }
  }
  if (failed) throw NumericalError(failure);
}

}  // namespace

Rng path_stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

JumpSampler::JumpSampler(const Coin& coin)
    : coin_(coin), g0_(build_G0(coin).G0), k_(coin.jump_rate_operator()) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(k_, Eigen::EigenvaluesOnly);
  max_rate_ = std::max(es.eigenvalues().maxCoeff(), 0.0);

  // e^{G0 t} via an eigendecomposition when G0 is comfortably diagonalizable.
  Eigen::ComplexEigenSolver<Matrix> ces(g0_);
  if (ces.info() == Eigen::Success) {
    eig_vecs_ = ces.eigenvectors();
    Eigen::FullPivLU<Matrix> lu(eig_vecs_);
    if (lu.isInvertible()) {
      eig_vecs_inv_ = lu.inverse();
      const double cond = eig_vecs_.norm() * eig_vecs_inv_.norm();
      eig_vals_ = ces.eigenvalues();
      diagonalizable_ = std::isfinite(cond) && cond < 1e6 &&
                        (eig_vecs_ * eig_vals_.asDiagonal() * eig_vecs_inv_ - g0_).norm() <=
                            1e-12 * std::max(1.0, g0_.norm());
    }
  }
}

Matrix JumpSampler::propagator(double t) const {
  if (!diagonalizable_) return mat_exp(g0_, t);
  const Vector phase = (eig_vals_ * t).array().exp();
  return eig_vecs_ * phase.asDiagonal() * eig_vecs_inv_;
}

double JumpSampler::survival(const Matrix& rho, double t) const {
  const Matrix p = propagator(t);
  return (p * rho * p.adjoint()).trace().real();
}

double JumpSampler::hazard(const Matrix& rho, double t) const {
  const Matrix p = propagator(t);
  return (k_ * p * rho * p.adjoint()).trace().real();
}

// Smallest t in (0, cap] with survival(t) = level, or +inf when survival
// stays above level up to cap.
double JumpSampler::solve_survival(const Matrix& rho, double level, double cap) const {
  if (max_rate_ <= 0.0) return std::numeric_limits<double>::infinity();
  // Exponential bracketing from the fastest possible decay scale.
  double lo = 0.0;
  double hi = 1.0 / max_rate_;
  const double guard = std::min(cap, 1e6 / max_rate_);
  while (survival(rho, hi) > level) {
    lo = hi;
    if (hi >= guard) {
      if (std::isfinite(cap) && hi >= cap) return std::numeric_limits<double>::infinity();
      std::ostringstream msg;
      msg << "sample_next_jump: survival stays above " << level << " up to t = " << hi
          << " (jump rate vanishes on a trapped subspace)";
      throw NumericalError(msg.str());
    }
    hi = std::min(2.0 * hi, guard);
  }

  // Safeguarded Newton on the bracket [lo, hi]; survival is decreasing.
  double t = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = survival(rho, t) - level;
    if (f > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo <= 1e-10 * hi) break;
    const double slope = -hazard(rho, t);
    double next = slope < 0.0 ? t - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-12 * t) {
      t = next;
      break;
    }
    t = next;
  }
  return t;
}

JumpSample JumpSampler::sample(const Matrix& rho, Rng& rng, double cap) const {
  const double level = uniform_open(rng);
  const double choice = uniform_open(rng);
  JumpSample out;
  out.dt = solve_survival(rho, level, cap);
  if (!std::isfinite(out.dt)) return out;

  const Matrix p = propagator(out.dt);
  const Matrix sigma = p * rho * p.adjoint();
  const Matrix right = coin_.A() * sigma * coin_.A().adjoint();
  const Matrix left = coin_.C() * sigma * coin_.C().adjoint();
  const double w_right = std::max(right.trace().real(), 0.0);
  const double w_left = std::max(left.trace().real(), 0.0);
  const double total = w_right + w_left;
  if (!(total > 0.0)) throw NumericalError("sample_next_jump: zero jump intensity at jump time");
  if (choice * total < w_right) {
    out.direction = +1;
    out.rho_after = right / w_right;
  } else {
    out.direction = -1;
    out.rho_after = left / w_left;
  }
  out.rho_after = 0.5 * (out.rho_after + out.rho_after.adjoint());
  return out;
}

JumpSample sample_next_jump(const Coin& coin, const DensityMatrix& rho, Rng& rng) {
  if (rho.dim() != coin.dim()) throw ValidationError("sample_next_jump: dimension mismatch");
  return JumpSampler(coin).sample(rho.matrix(), rng);
}

TrajectoryPath simulate_path(const Coin& coin, int i0, const DensityMatrix& rho0, double T,
                             Rng& rng) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("simulate_path: T must be > 0");
  if (rho0.dim() != coin.dim()) throw ValidationError("simulate_path: dimension mismatch");
  const JumpSampler sampler(coin);
  TrajectoryPath path;
  path.horizon = T;
  path.sites.push_back(i0);
  path.states.push_back(rho0);
  double t = 0.0;
  Matrix rho = rho0.matrix();
  while (true) {
    const JumpSample js = sampler.sample(rho, rng, T - t);
    if (!js.jumped() || t + js.dt > T) break;
    if (static_cast<long>(path.jump_times.size()) >= kMaxJumpsPerPath) {
      throw NumericalError("simulate_path: jump-count guard exceeded");
    }
    t += js.dt;
    path.jump_times.push_back(t);
    path.sites.push_back(path.sites.back() + js.direction);
    rho = js.rho_after;
    path.states.push_back(DensityMatrix::from_matrix(rho, 1e-8));
  }
  return path;
}

int simulate_endpoint(const JumpSampler& sampler, int i0, const Matrix& rho0, double T, Rng& rng) {
  double t = 0.0;
  int x = i0;
  Matrix rho = rho0;
  for (long jumps = 0;; ++jumps) {
    const JumpSample js = sampler.sample(rho, rng, T - t);
    if (!js.jumped() || t + js.dt > T) break;
    if (jumps >= kMaxJumpsPerPath) throw NumericalError("simulate_path: jump-count guard exceeded");
    t += js.dt;
    x += js.direction;
    rho = js.rho_after;
  }
  return x;
}

DriftEstimate estimate_drift(const Coin& coin, const DensityMatrix& rho0, double T, long n_paths,
                             std::uint64_t seed, Execution exec) {
  if (!(T >= 100.0)) throw ValidationError("estimate_drift: horizon must be >= 100");
  if (n_paths < 100) throw ValidationError("estimate_drift: need at least 100 paths");
  if (rho0.dim() != coin.dim()) throw ValidationError("estimate_drift: dimension mismatch");
  const JumpSampler sampler(coin);
  std::vector<double> velocity(static_cast<std::size_t>(n_paths));

  // Per-path results land in fixed slots; aggregation below runs in index
  // order, so the estimate does not depend on the schedule.
  for_each_path(n_paths, exec, [&](long p) {
    Rng rng = path_stream(seed, static_cast<std::uint64_t>(p));
    velocity[static_cast<std::size_t>(p)] = simulate_endpoint(sampler, 0, rho0.matrix(), T, rng) / T;
  });

  CompensatedSum sum;
  for (double v : velocity) sum.add(v);
  const double mean = sum.value() / static_cast<double>(n_paths);
  CompensatedSum sq;
  for (double v : velocity) sq.add((v - mean) * (v - mean));
  const double var = sq.value() / static_cast<double>(n_paths - 1);

  DriftEstimate out;
  out.mean = mean;
  out.std_error = std::sqrt(var / static_cast<double>(n_paths));
  out.n_paths = n_paths;
  out.horizon = T;
  out.seed = seed;
  return out;
}

std::vector<double> empirical_occupation(const Coin& coin, const DensityMatrix& rho0, double t,
                                         long n_paths, int M, std::uint64_t seed,
                                         Execution exec) {
  if (!(t > 0.0)) throw ValidationError("empirical_occupation: t must be > 0");
  if (n_paths < 1 || M < 0) throw ValidationError("empirical_occupation: bad sizes");
  const JumpSampler sampler(coin);
  std::vector<int> endpoint(static_cast<std::size_t>(n_paths));
  for_each_path(n_paths, exec, [&](long p) {
    Rng rng = path_stream(seed, static_cast<std::uint64_t>(p));
    endpoint[static_cast<std::size_t>(p)] = simulate_endpoint(sampler, 0, rho0.matrix(), t, rng);
  });
  std::vector<double> freq(static_cast<std::size_t>(2 * M + 1), 0.0);
  for (int x : endpoint) {
    if (x >= -M && x <= M) freq[static_cast<std::size_t>(x + M)] += 1.0;
  }
  for (double& f : freq) f /= static_cast<double>(n_paths);
  return freq;
}

}  // namespace ctoqw
