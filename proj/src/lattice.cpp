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

#include "ctoqw/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "ctoqw/error.hpp"

namespace ctoqw {

namespace {

// Dormand-Prince 5(4) tableau. The block ODE is autonomous, so the nodes c_i
// are not needed.
constexpr std::array<std::array<double, 6>, 7> kA{{
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
}};
// b - b_hat (fifth minus fourth order weights).
constexpr std::array<double, 7> kErr{71.0 / 57600,      0.0,         -71.0 / 16695, 71.0 / 1920,
                                     -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

void check_site(const BlockGenerator& gen, int site, const char* what) {
  if (site < -gen.M() || site > gen.M()) {
    std::ostringstream msg;
    msg << what << ": site " << site << " outside the truncated lattice [-" << gen.M() << ", "
        << gen.M() << "]";
    throw ValidationError(msg.str());
  }
}

void check_time(double t, const char* what) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw ValidationError(std::string(what) + ": time must be finite and non-negative");
  }
}

}  // namespace

double BlockState::retained_trace() const {
  double total = 0.0;
  for (const Matrix& b : blocks) total += b.trace().real();
  return total;
}

double BlockState::min_eigenvalue() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const Matrix& b : blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(b, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues().minCoeff());
  }
  return lo;
}

BlockGenerator::BlockGenerator(const Coin& coin, int M) : coin_(coin), M_(M) {
  if (M < 1) throw ValidationError("block generator: truncation radius M must be >= 1");
  if (coin.dim() > 16) throw ValidationError("block generator: coin dimension above 16");
  g0_ = build_G0(coin).G0;
  g0_adj_ = g0_.adjoint();
  a_adj_ = coin.A().adjoint();
  c_adj_ = coin.C().adjoint();
  a_out_ = coin.A().adjoint() * coin.A();
  c_out_ = coin.C().adjoint() * coin.C();
}

void BlockGenerator::apply(std::span<const cplx> in, std::span<cplx> out, Execution exec) const {
  const kernels::BlockOperators ops{static_cast<int>(dim()), g0_.data(),      g0_adj_.data(),
                                    coin_.A().data(),        a_adj_.data(),   coin_.C().data(),
                                    c_adj_.data()};
  if (exec == Execution::Serial) {
    kernels::serial::apply_block_generator(ops, in, out);
  } else {
    kernels::omp::apply_block_generator(ops, in, out);
  }
}

double BlockGenerator::outflow_rate(std::span<const cplx> in) const {
  const Eigen::Index d = dim();
  const Eigen::Index bs = d * d;
  const Eigen::Map<const Matrix> right(in.data() + (n_sites() - 1) * bs, d, d);
  const Eigen::Map<const Matrix> left(in.data(), d, d);
  // Tr(A rho A*) = Tr(A*A rho)
  return (a_out_ * right).trace().real() + (c_out_ * left).trace().real();
}

Matrix BlockGenerator::dense() const {
  const Eigen::Index n = state_size();
  Matrix out = Matrix::Zero(n + 1, n + 1);
  Vector unit = Vector::Zero(n);
  Vector col(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    unit(k) = 1.0;
    apply({unit.data(), static_cast<std::size_t>(n)}, {col.data(), static_cast<std::size_t>(n)},
          Execution::Serial);
    out.col(k).head(n) = col;
    // Boundary flux Tr(A*A rho) is complex-linear: coefficient of rho(r, c) is (A*A)(c, r).
    const Eigen::Index bs = dim() * dim();
    const Eigen::Index site = k / bs;
    const Eigen::Index off = k % bs;
    const Eigen::Index r = off % dim();
    const Eigen::Index c = off / dim();
    cplx flux = 0.0;
    if (site == n_sites() - 1) flux += a_out_(c, r);
    if (site == 0) flux += c_out_(c, r);
    out(n, k) = flux;
    unit(k) = 0.0;
  }
  return out;
}

LatticeEvolution::LatticeEvolution(const BlockGenerator& gen, const DensityMatrix& rho0, int i0,
                                   IntegratorOptions opts)
    : gen_(&gen), opts_(opts) {
  check_site(gen, i0, "evolve");
  if (rho0.dim() != gen.dim()) throw ValidationError("evolve: density dimension mismatch");
  const Eigen::Index n = gen.state_size();
  const Eigen::Index d = gen.dim();
  y_ = Vector::Zero(n + 1);
  const Eigen::Index base = (i0 + gen.M()) * d * d;
  y_.segment(base, d * d) = vec(rho0.matrix());
  dense_ = n + 1 <= opts_.dense_limit;
  if (dense_) {
    generator_ = gen.dense();
  } else {
    k_.assign(7, Vector::Zero(n + 1));
  }
}

void LatticeEvolution::advance_to(double t) {
  check_time(t, "evolve");
  if (t < time_) throw ValidationError("evolve: cannot advance backwards in time");
  if (t == time_) return;
  if (dense_) {
    advance_dense(t - time_);
  } else {
    advance_rk(t);
  }
  time_ = t;
}

void LatticeEvolution::advance_dense(double dt) {
  if (std::abs(dt - cached_dt_) > 1e-15 * std::max(1.0, dt)) {
    cached_prop_ = mat_exp(generator_, dt);
    cached_dt_ = dt;
  }
  y_ = cached_prop_ * y_;
  ++steps_;
}

void LatticeEvolution::advance_rk(double t_end) {
  const Eigen::Index n = gen_->state_size();
  const auto span_of = [n](Vector& v) { return std::span<cplx>(v.data(), n); };
  const auto cspan_of = [n](const Vector& v) { return std::span<const cplx>(v.data(), n); };
  const auto rhs = [&](const Vector& y, Vector& dy) {
    gen_->apply(cspan_of(y), span_of(dy), opts_.exec);
    dy(n) = gen_->outflow_rate(cspan_of(y));
  };
  const auto combine = [&](const Vector& x, double h, std::span<const double> coeff, Vector& out) {
    std::array<const cplx*, 7> stages{};
    for (std::size_t k = 0; k < coeff.size(); ++k) stages[k] = k_[k].data();
    const std::span<const cplx> xs(x.data(), n + 1);
    const std::span<cplx> os(out.data(), n + 1);
    const std::span<const cplx* const> ss(stages.data(), coeff.size());
    if (opts_.exec == Execution::Serial) {
      kernels::serial::axpy_stages(xs, h, coeff, ss, os);
    } else {
      kernels::omp::axpy_stages(xs, h, coeff, ss, os);
    }
  };

  Vector stage(n + 1);
  Vector y_new(n + 1);
  if (h_ <= 0.0) h_ = 1e-3;

  while (time_ < t_end) {
    const double remaining = t_end - time_;
    const bool last = h_ >= remaining;
    const double h = last ? remaining : h_;
    if (h < 1e-13 * std::max(1.0, time_) && !last) {
      throw NumericalError("evolve: step size underflow (stiff or badly scaled coin)");
    }
    if (!fsal_valid_) {
      rhs(y_, k_[0]);
      fsal_valid_ = true;
    }
    for (std::size_t s = 1; s < 7; ++s) {
      combine(y_, h, std::span<const double>(kA[s].data(), s), stage);
      rhs(stage, k_[s]);
    }
    // Row 7 of the tableau is the fifth-order solution, already in `stage`.
    y_new = stage;

    double err2 = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i) {
      cplx e = 0.0;
      for (std::size_t s = 0; s < 7; ++s) {
        if (kErr[s] != 0.0) e += kErr[s] * k_[s](i);
      }
      const double sc =
          opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y_(i)), std::abs(y_new(i)));
      const double r = std::abs(h * e) / sc;
      err2 += r * r;
    }
    const double err = std::sqrt(err2 / static_cast<double>(n + 1));
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      time_ = last ? t_end : time_ + h;
      y_.swap(y_new);
      k_[0].swap(k_[6]);  // FSAL
      ++steps_;
      if (!last || factor < 1.0) h_ = h * factor;
      if (last) break;
    } else {
      h_ = h * factor;
    }
  }
}

double LatticeEvolution::trace_at(int site) const {
  check_site(*gen_, site, "trace_at");
  const Eigen::Index d = gen_->dim();
  const Eigen::Index base = (site + gen_->M()) * d * d;
  double tr = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) tr += y_(base + k * d + k).real();
  return tr;
}

Matrix LatticeEvolution::block(int site) const {
  check_site(*gen_, site, "block");
  const Eigen::Index d = gen_->dim();
  const Eigen::Index base = (site + gen_->M()) * d * d;
  const Matrix b = Eigen::Map<const Matrix>(y_.data() + base, d, d);
  return 0.5 * (b + b.adjoint());
}

BlockState LatticeEvolution::state() const {
  BlockState s;
  s.M = gen_->M();
  s.time = time_;
  s.leaked_mass = leaked_mass();
  s.blocks.reserve(static_cast<std::size_t>(gen_->n_sites()));
  for (int i = -gen_->M(); i <= gen_->M(); ++i) s.blocks.push_back(block(i));
  return s;
}

int auto_truncation(const Coin& coin, const DensityMatrix& rho0, double horizon, double leak_tol) {
  check_time(horizon, "auto_truncation");
  Eigen::SelfAdjointEigenSolver<Matrix> es(coin.jump_rate_operator(), Eigen::EigenvaluesOnly);
  const double rate = std::max(es.eigenvalues().maxCoeff(), 1e-12);
  int M = static_cast<int>(std::ceil(6.0 * std::sqrt(rate * horizon) + 8.0));
  IntegratorOptions pilot;
  pilot.rel_tol = 1e-6;
  pilot.abs_tol = 1e-14;
  for (; M <= (1 << 15); M *= 2) {
    const BlockGenerator gen(coin, M);
    LatticeEvolution ev(gen, rho0, 0, pilot);
    ev.advance_to(horizon);
    if (ev.leaked_mass() <= 0.1 * leak_tol) return M;
  }
  throw NumericalError("auto_truncation: leakage stays above tolerance up to M = 32768");
}

BlockState evolve(const BlockGenerator& gen, const DensityMatrix& rho0, int i0, double t,
                  IntegratorOptions opts) {
  check_time(t, "evolve");
  LatticeEvolution ev(gen, rho0, i0, opts);
  ev.advance_to(t);
  return ev.state();
}

double transition_probability(const BlockGenerator& gen, const DensityMatrix& rho0, int i0, int j,
                              double t, IntegratorOptions opts) {
  check_site(gen, j, "transition_probability");
  LatticeEvolution ev(gen, rho0, i0, opts);
  ev.advance_to(t);
  return std::clamp(ev.trace_at(j), 0.0, 1.0);
}

DensityMatrix conditioned_state(const BlockGenerator& gen, const DensityMatrix& rho0, int i0,
                                int k, double beta, IntegratorOptions opts) {
  check_site(gen, k, "conditioned_state");
  LatticeEvolution ev(gen, rho0, i0, opts);
  ev.advance_to(beta);
  const Matrix b = ev.block(k);
  const double p = b.trace().real();
  if (p <= 1e-12) {
    std::ostringstream msg;
    msg << "conditioned_state: site " << k << " has negligible probability " << p;
    throw NumericalError(msg.str());
  }
  return DensityMatrix::from_matrix(b / p, 1e-8);
}

double chapman_kolmogorov_residual(const BlockGenerator& gen, const DensityMatrix& rho0, int i0,
                                   int j, double alpha, double beta, IntegratorOptions opts) {
  check_time(alpha, "chapman_kolmogorov_residual");
  check_time(beta, "chapman_kolmogorov_residual");
  check_site(gen, j, "chapman_kolmogorov_residual");

  LatticeEvolution direct(gen, rho0, i0, opts);
  direct.advance_to(alpha + beta);
  if (direct.leaked_mass() > kLeakTol) {
    std::ostringstream msg;
    msg << "chapman_kolmogorov_residual: leakage " << direct.leaked_mass()
        << " at alpha + beta; enlarge M";
    throw NumericalError(msg.str());
  }
  const double lhs = direct.trace_at(j);

  LatticeEvolution first(gen, rho0, i0, opts);
  first.advance_to(beta);
  double rhs = 0.0;
  for (int k = -gen.M(); k <= gen.M(); ++k) {
    const Matrix b = first.block(k);
    const double p_k = b.trace().real();
    if (p_k <= 1e-12) continue;
    // Conditioning may pick up O(tol) negative eigenvalues; renormalizing is enough here.
    const DensityMatrix rho_k = DensityMatrix::from_matrix(b / p_k, 1e-6);
    LatticeEvolution second(gen, rho_k, k, opts);
    second.advance_to(alpha);
    rhs += second.trace_at(j) * p_k;
  }
  return std::abs(lhs - rhs);
}

double ReturnIntegral::up_to(double t) const {
  if (cumulative.empty()) return 0.0;
  const auto pairs = static_cast<std::size_t>(std::floor(t / (2.0 * step) + 1e-9));
  return cumulative.at(std::min(pairs, cumulative.size() - 1));
}

ReturnIntegral return_integral_series(const BlockGenerator& gen, const DensityMatrix& rho0, int i0,
                                      double T, double quad_step, IntegratorOptions opts) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("return_integral: T must be > 0");
  if (!(quad_step > 0.0)) throw ValidationError("return_integral: quad_step must be > 0");
  auto n = static_cast<long>(std::ceil(T / quad_step - 1e-9));
  n = std::max(n, 2L);
  if (n % 2 != 0) ++n;

  ReturnIntegral out;
  out.step = T / static_cast<double>(n);
  out.times.resize(static_cast<std::size_t>(n + 1));
  out.p.resize(static_cast<std::size_t>(n + 1));
  LatticeEvolution ev(gen, rho0, i0, opts);
  for (long k = 0; k <= n; ++k) {
    const double t = k == n ? T : static_cast<double>(k) * out.step;
    ev.advance_to(t);
    out.times[static_cast<std::size_t>(k)] = t;
    out.p[static_cast<std::size_t>(k)] = ev.trace_at(i0);
  }
  out.leaked_mass = ev.leaked_mass();
  if (out.leaked_mass > kLeakTol) {
    std::ostringstream msg;
    msg << "return_integral: boundary leakage " << out.leaked_mass << " before T = " << T
        << "; enlarge M";
    throw NumericalError(msg.str());
  }

  out.cumulative.reserve(static_cast<std::size_t>(n / 2 + 1));
  out.cumulative.push_back(0.0);
  double acc = 0.0;
  for (long k = 0; k + 2 <= n; k += 2) {
    const auto i = static_cast<std::size_t>(k);
    acc += out.step / 3.0 * (out.p[i] + 4.0 * out.p[i + 1] + out.p[i + 2]);
    out.cumulative.push_back(acc);
  }
  out.value = acc;
  return out;
}

double return_integral(const BlockGenerator& gen, const DensityMatrix& rho0, int i0, double T,
                       double quad_step, IntegratorOptions opts) {
  return return_integral_series(gen, rho0, i0, T, quad_step, opts).value;
}

SkeletonSeries skeleton_series(const BlockGenerator& gen, const DensityMatrix& rho0, int i0, int j,
                               double delta, int N, IntegratorOptions opts) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("skeleton: delta must be > 0");
  if (N < 0) throw ValidationError("skeleton: N must be >= 0");
  check_site(gen, j, "skeleton");
  SkeletonSeries out;
  out.delta = delta;
  out.p.reserve(static_cast<std::size_t>(N) + 1);
  out.partial_sums.reserve(static_cast<std::size_t>(N) + 1);
  LatticeEvolution ev(gen, rho0, i0, opts);
  double acc = 0.0;
  for (int k = 0; k <= N; ++k) {
    ev.advance_to(static_cast<double>(k) * delta);
    const double p = ev.trace_at(j);
    acc += p;
    out.p.push_back(p);
    out.partial_sums.push_back(acc);
  }
  out.leaked_mass = ev.leaked_mass();
  return out;
}

double skeleton_sum(const BlockGenerator& gen, const DensityMatrix& rho0, int i0, int j,
                    double delta, int N, IntegratorOptions opts) {
  return skeleton_series(gen, rho0, i0, j, delta, N, opts).value();
}

}  // namespace ctoqw
