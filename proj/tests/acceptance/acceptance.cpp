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

// Acceptance run: one PASS/FAIL line per criterion, each with its numeric
// evidence and wall time. Exit status 0 iff every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "ctoqw/auxiliary.hpp"
#include "ctoqw/classifier.hpp"
#include "ctoqw/cli.hpp"
#include "ctoqw/fixtures.hpp"
#include "ctoqw/io.hpp"
#include "ctoqw/lattice.hpp"
#include "ctoqw/trajectory.hpp"
#include "support/test_support.hpp"

using namespace ctoqw;
using io::json;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

std::string g17(double x) { return io::format_real(x); }

std::string coin_path(const char* name) { return std::string(CTOQW_DATA_DIR) + "/coins/" + name; }

json run_cli(cli::Command cmd, const std::string& path, int& status) {
  cli::RunConfig cfg;
  cfg.command = cmd;
  cfg.coin_path = path;
  std::ostringstream out, err;
  status = cli::run(cfg, out, err);
  return json::parse(out.str());
}

Matrix matrix_from(const json& rows) {
  return io::matrix_from_json(rows, static_cast<Eigen::Index>(rows.size()), "rho_inv");
}

// 1. Stationary states and drifts of the 3x3 coin through the CLI.
void stationary_reproduction(Outcome& o) {
  struct Case {
    const char* file;
    Matrix rho;
    double m;
  };
  const Case cases[] = {{"ex4_c0.json", fixtures::three_level_c0_rho_inv(), -6.0 / 53.0},
                        {"ex4_c1.json", fixtures::three_level_c1_rho_inv(), 0.0}};
  for (const Case& c : cases) {
    int status = 0;
    const json st = run_cli(cli::Command::Stationary, coin_path(c.file), status);
    o.require(status == 0 && st["h1"] == true, std::string(c.file) + " stationary");
    const double err = (matrix_from(st["rho_inv"]) - c.rho).cwiseAbs().maxCoeff();
    const json dr = run_cli(cli::Command::Drift, coin_path(c.file), status);
    const double m = dr["m"].get<double>();
    o.require(err <= 1e-9, std::string(c.file) + " rho_inv");
    o.require(std::abs(m - c.m) <= 1e-9, std::string(c.file) + " m");
    o.detail << c.file << ": max|rho_inv-ref|=" << g17(err) << " m=" << g17(m) << "; ";
  }
}

// 2. Two-parameter family: closed-form drift at y = 0 and the zero-drift roots at y = 1/2.
void two_param_closed_forms(Outcome& o) {
  double worst = 0.0;
  for (double h : {0.0, 0.5, 1.0, 4.0 / 3.0, 2.0}) {
    const Coin coin = fixtures::two_param(0.0, h);
    const StationaryAnalysis sa = stationary_states(coin);
    o.require(sa.rho_inv.has_value(), "unique stationary state");
    if (!sa.rho_inv) return;
    worst = std::max(worst, std::abs(drift(coin, *sa.rho_inv).m - fixtures::two_param_drift_y0(h)));
  }
  o.require(worst <= 1e-9, "y=0 drift formula");
  o.detail << "y=0 max|m-formula|=" << g17(worst) << "; ";
  for (double h : {fixtures::two_param_root_minus(), fixtures::two_param_root_plus()}) {
    const Verdict at = classify(fixtures::two_param(0.5, h)).verdict;
    const Verdict below = classify(fixtures::two_param(0.5, h - 0.1)).verdict;
    const Verdict above = classify(fixtures::two_param(0.5, h + 0.1)).verdict;
    o.require(at == Verdict::Recurrent, "root recurrent");
    o.require(below == Verdict::Transient && above == Verdict::Transient, "off-root transient");
    o.detail << "y=1/2 h=" << g17(h) << ": " << to_string(at) << ", +-0.1: " << to_string(below) << "/"
             << to_string(above) << "; ";
  }
}

// 3. Classification fixtures.
void classification_fixtures(Outcome& o) {
  const double r8 = 2.0 * std::sqrt(2.0);
  int checked = 0;
  const auto expect = [&](const std::string& name, const Coin& coin, Verdict v, const Vector* transient = nullptr) {
    const ClassificationResult r = classify(coin);
    bool ok = r.verdict == v;
    if (ok && transient) {
      ok = r.transient_state &&
           (r.transient_state->matrix() - DensityMatrix::from_pure(*transient).matrix()).norm() < 1e-8;
    }
    o.require(ok, name + " got " + std::string(to_string(r.verdict)));
    ++checked;
  };
  for (cplx a : {cplx(r8), cplx(0.0, r8), std::polar(r8, 1.1)}) expect("diag pair |a|=2sqrt2", fixtures::diagonal_pair(a), Verdict::Recurrent);
  for (cplx a : {cplx(0.0), cplx(1.0), cplx(2.8), cplx(2.9), cplx(0.0, 3.0)}) expect("diag pair |a|!=2sqrt2", fixtures::diagonal_pair(a), Verdict::Transient);

  const cplx h2(0.0, 0.5);
  const Vector u1 = fixtures::shared_basis_u1();
  const Vector u2 = fixtures::shared_basis_u2();
  expect("branch a", fixtures::shared_basis(3.0, 3.0, 1.0, h2, 1.0), Verdict::Transient);
  expect("branch a'", fixtures::shared_basis(0.5, cplx(0.0, 1.0), 1.0, h2, 1.0), Verdict::Transient);
  expect("branch b", fixtures::shared_basis(1.0, 2.0, 1.0, h2, 1.0), Verdict::Recurrent);
  expect("branch b'", fixtures::shared_basis(cplx(0.0, 1.0), cplx(0.0, -2.0), 1.0, h2, 1.0), Verdict::Recurrent);
  expect("branch c", fixtures::shared_basis(2.0, 2.0, 1.0, h2, 1.0), Verdict::PartiallyRecurrent, &u1);
  expect("branch c'", fixtures::shared_basis(0.3, cplx(0.0, 2.0), 1.0, h2, 1.0), Verdict::PartiallyRecurrent, &u1);
  expect("branch d", fixtures::shared_basis(1.0, 1.0, 1.0, h2, 1.0), Verdict::PartiallyRecurrent, &u2);
  expect("branch d'", fixtures::shared_basis(cplx(0.0, 1.0), 3.0, 1.0, h2, 1.0), Verdict::PartiallyRecurrent, &u2);
  expect("unique |c|^2-|a|^2=3", fixtures::shared_basis(1.0, 2.0, 1.0, 1.0, 0.0), Verdict::Recurrent);
  expect("unique |c|^2-|a|^2!=3", fixtures::shared_basis(1.0, 1.0, 1.0, 1.0, 0.0), Verdict::Transient);

  expect("3x3 c=0", fixtures::three_level(0.0), Verdict::Transient);
  expect("3x3 c=1", fixtures::three_level(1.0), Verdict::Recurrent);
  o.detail << checked << " verdicts checked; ";
}

// 4. Monte Carlo drift of the 3x3 coin.
void law_of_large_numbers(Outcome& o) {
  const DriftEstimate est =
      estimate_drift(fixtures::three_level(0.0), DensityMatrix::maximally_mixed(3), 2000.0, 400, 20240611);
  const double m = -6.0 / 53.0;
  o.require(std::abs(est.mean - m) <= 3.0 * est.std_error, "mean within 3 stderr");
  o.require(est.std_error < 0.02, "stderr < 0.02");
  o.detail << "mean=" << g17(est.mean) << " stderr=" << g17(est.std_error) << " |mean-m|/stderr="
           << g17(std::abs(est.mean - m) / est.std_error) << "; ";
}

// 5. Chapman-Kolmogorov residuals.
void chapman_kolmogorov(Outcome& o) {
  testing::Gen g(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (const Coin& coin : {fixtures::three_level(0.0), fixtures::two_param(0.5, 0.3)}) {
    const DensityMatrix rho = testing::random_density(coin.dim(), g);
    const int M = auto_truncation(coin, rho, 2.0);
    const BlockGenerator gen(coin, M);
    for (int k = 0; k < 20; ++k) {
      const double alpha = 1.0 - u(g);  // (0, 1]
      const double beta = 1.0 - u(g);
      const int j = k % 5 - 2;
      worst = std::max(worst, chapman_kolmogorov_residual(gen, rho, 0, j, alpha, beta));
    }
  }
  o.require(worst <= 1e-7, "residual <= 1e-7");
  o.detail << "max residual=" << g17(worst) << " over 40 (alpha, beta) pairs; ";
}

// 6. Growth character of the return integral and the skeleton series.
void divergence_character(Outcome& o) {
  const DensityMatrix one = DensityMatrix::maximally_mixed(1);
  {
    const Coin coin = fixtures::scalar(1.0, 1.0);
    const int M = auto_truncation(coin, one, 400.0);
    const BlockGenerator gen(coin, M);
    const ReturnIntegral r = return_integral_series(gen, one, 0, 400.0, 0.05);
    const double int_ratio = r.value / r.up_to(100.0);
    const SkeletonSeries s = skeleton_series(gen, one, 0, 0, 1.0, 400);
    const double skel_ratio = s.partial_sums[400] / s.partial_sums[100];
    o.require(int_ratio >= 1.8 && int_ratio <= 2.2, "recurrent integral ratio");
    o.require(skel_ratio >= 1.8 && skel_ratio <= 2.2, "recurrent skeleton ratio");
    o.detail << "scalar a=c=1: I(400)/I(100)=" << g17(int_ratio) << " S(400)/S(100)=" << g17(skel_ratio) << "; ";
  }
  {
    const Coin coin = fixtures::three_level(0.0);
    const DensityMatrix rho = DensityMatrix::maximally_mixed(3);
    const int M = auto_truncation(coin, rho, 400.0);
    const BlockGenerator gen(coin, M);
    const ReturnIntegral r = return_integral_series(gen, rho, 0, 400.0, 0.05);
    const double int_change = (r.value - r.up_to(200.0)) / r.value;
    const SkeletonSeries s = skeleton_series(gen, rho, 0, 0, 1.0, 400);
    const double skel_change = (s.partial_sums[400] - s.partial_sums[200]) / s.partial_sums[400];
    o.require(int_change < 0.05, "transient integral relative change < 5%");
    o.require(skel_change < 0.05, "transient skeleton relative change < 5%");
    o.detail << "3x3 c=0: integral change 200->400=" << g17(int_change) << " skeleton change=" << g17(skel_change)
             << "; ";
  }
}

// 7. Scalar coins reduce to the classical birth-death walk.
void classical_reduction(Outcome& o) {
  const DensityMatrix one = DensityMatrix::maximally_mixed(1);
  const Coin sym = fixtures::scalar(1.0, 1.0);
  const BlockGenerator gen(sym, auto_truncation(sym, one, 5.0));
  LatticeEvolution ev(gen, one, 0);
  double worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.05 * k;
    ev.advance_to(t);
    const double ref = std::exp(-2.0 * t) * std::cyl_bessel_i(0.0, 2.0 * t);
    worst = std::max(worst, std::abs(ev.trace_at(0) - ref));
  }
  o.require(worst <= 1e-6, "p00 vs e^{-2t} I0(2t)");
  o.detail << "max|p00-e^{-2t}I0(2t)|=" << g17(worst) << "; ";

  for (auto [a, c] : {std::pair{1.0, 1.0}, std::pair{2.0, 1.0}}) {
    const Coin coin = fixtures::scalar(a, c);
    const double rate = a * a + c * c;
    const double T = 5.0;
    const long n = 10000;
    std::vector<double> counts(static_cast<std::size_t>(n));
    for (long p = 0; p < n; ++p) {
      Rng rng = path_stream(777, static_cast<std::uint64_t>(p));
      counts[static_cast<std::size_t>(p)] =
          static_cast<double>(simulate_path(coin, 0, one, T, rng).jump_times.size());
    }
    double mean = 0.0;
    for (double x : counts) mean += x;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double x : counts) var += (x - mean) * (x - mean);
    var /= static_cast<double>(n - 1);
    const double lam = rate * T;
    const double se_mean = std::sqrt(lam / n);
    const double se_var = std::sqrt((lam + 2.0 * lam * lam) / n);  // Poisson fourth moment
    o.require(std::abs(mean - lam) <= 3.0 * se_mean, "Poisson mean");
    o.require(std::abs(var - lam) <= 3.0 * se_var, "Poisson variance");
    o.detail << "rate " << rate << ": mean=" << g17(mean) << " var=" << g17(var) << " (expected " << lam << "); ";
  }
}

// 8. Invariants over 200 random coins.
void invariant_suites(Outcome& o) {
  testing::Gen g(8);
  double trace_err = 0.0, min_eig = std::numeric_limits<double>::infinity(), cov_err = 0.0, annihilation = 0.0, drift_res = 0.0, cone = 0.0;
  int h1_count = 0;
  for (int k = 0; k < 200; ++k) {
    const int d = k < 100 ? 2 : 3;
    const Coin coin = testing::random_coin(d, g);
    const DensityMatrix rho = testing::random_density(d, g);

    const BlockState s = evolve(build_block_generator(coin, 10), rho, 0, 1.0);
    trace_err = std::max(trace_err, std::abs(s.retained_trace() + s.leaked_mass - 1.0));
    min_eig = std::min(min_eig, s.min_eigenvalue());

    const Matrix x = testing::random_matrix(d, g);
    annihilation = std::max(annihilation, std::abs(apply_aux_lindblad(coin, x).trace()));

    const StationaryAnalysis sa = stationary_states(coin);
    if (sa.rho_inv) {
      ++h1_count;
      const double m = drift(coin, *sa.rho_inv).m;
      drift_res = std::max(drift_res, solve_drift_operator(coin, m).residual);
      const Matrix u = testing::random_unitary(d, g);
      const Coin moved = testing::conjugate_coin(coin, u);
      const StationaryAnalysis sb = stationary_states(moved);
      if (!sb.rho_inv) {
        cov_err = std::numeric_limits<double>::infinity();
      } else {
        const Matrix expected = u * sa.rho_inv->matrix() * u.adjoint();
        cov_err = std::max(cov_err, (sb.rho_inv->matrix() - expected).cwiseAbs().maxCoeff());
        cov_err = std::max(cov_err, std::abs(drift(moved, *sb.rho_inv).m - m));
      }
    }

    // Diagonal part of the same coin, diagonal initial blocks.
    Matrix hd = Matrix::Zero(d, d);
    hd.diagonal() = coin.H().diagonal().real().cast<cplx>();
    const Coin diag = Coin::validate(Matrix(coin.C().diagonal().asDiagonal()),
                                     Matrix(coin.A().diagonal().asDiagonal()), hd);
    Matrix rd = Matrix::Zero(d, d);
    rd.diagonal() = rho.matrix().diagonal();
    const BlockState sd = evolve(build_block_generator(diag, 10), DensityMatrix::from_matrix(rd), 0, 1.0);
    for (int i = -10; i <= 10; ++i) {
      Matrix off = sd.at(i);
      off.diagonal().setZero();
      cone = std::max(cone, off.cwiseAbs().maxCoeff());
    }
  }
  o.require(trace_err <= 1e-8, "trace conservation");
  o.require(min_eig >= -1e-9, "block positivity");
  o.require(cov_err <= 1e-8, "unitary covariance");
  o.require(annihilation <= 1e-12, "trace annihilation");
  o.require(drift_res <= 1e-8, "drift-operator residual");
  o.require(cone <= 1e-12, "diagonal cone");
  o.require(h1_count > 150, "most random coins have a unique stationary state");
  o.detail << "trace err=" << g17(trace_err) << " min eig=" << g17(min_eig) << " covariance err=" << g17(cov_err)
           << " |Tr L(X)|=" << g17(annihilation) << " drift residual=" << g17(drift_res)
           << " off-diagonal=" << g17(cone) << " (" << h1_count << "/200 with unique state); ";
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "stationary-state reproduction", 1.0, stationary_reproduction},
      {2, "two-parameter closed forms", 1.0, two_param_closed_forms},
      {3, "classification fixtures", 1.0, classification_fixtures},
      {4, "law of large numbers", 300.0, law_of_large_numbers},
      {5, "Chapman-Kolmogorov", 60.0, chapman_kolmogorov},
      {6, "recurrence divergence character", 120.0, divergence_character},
      {7, "classical reduction", 120.0, classical_reduction},
      {8, "invariant suites", 300.0, invariant_suites},
  };
  bool all = true;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "] ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= c.budget_seconds) {
      o.pass = false;
      o.detail << "[over runtime budget " << c.budget_seconds << " s] ";
    }
    all = all && o.pass;
    std::printf("%s criterion %d (%s): %s(%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%s\n", all ? "all acceptance criteria passed" : "some acceptance criteria failed");
  return all ? 0 : 1;
}
