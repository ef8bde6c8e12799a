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

#include "ctoqw/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ctoqw/auxiliary.hpp"
#include "ctoqw/classifier.hpp"
#include "ctoqw/error.hpp"
#include "ctoqw/fixtures.hpp"
#include "ctoqw/io.hpp"
#include "ctoqw/lattice.hpp"
#include "ctoqw/trajectory.hpp"

namespace ctoqw::cli {

namespace {

using io::json;

struct Outcome {
  std::string text;
  int status = kExitOk;
};

double positive(const std::optional<double>& v, const char* flag, std::optional<double> fallback = {}) {
  if (!v) {
    if (fallback) return *fallback;
    throw ValidationError(std::string("missing required option ") + flag);
  }
  if (!(*v > 0.0) || !std::isfinite(*v)) throw ValidationError(std::string(flag) + " must be > 0");
  return *v;
}

long positive_count(const std::optional<long>& v, const char* flag, long fallback) {
  if (!v) return fallback;
  if (*v <= 0) throw ValidationError(std::string(flag) + " must be > 0");
  return *v;
}

int truncation(const RunConfig& cfg, const Coin& coin, const DensityMatrix& rho0, double horizon) {
  if (cfg.trunc) {
    if (*cfg.trunc < 1) throw ValidationError("--trunc must be >= 1");
    return *cfg.trunc;
  }
  return auto_truncation(coin, rho0, horizon);
}

void check_site_in_range(int site, int M) {
  if (site < -M || site > M) {
    throw ValidationError("--site " + std::to_string(site) + " lies outside the truncated lattice [-" +
                          std::to_string(M) + ", " + std::to_string(M) + "]");
  }
}

// Leakage above tolerance flags the run as numerically unreliable.
int leak_status(double leaked, std::ostream& err) {
  if (leaked <= kLeakTol) return kExitOk;
  err << "warning: leaked mass " << io::format_real(leaked) << " exceeds " << io::format_real(kLeakTol)
      << "; increase --trunc\n";
  return kExitNumerical;
}

Outcome cmd_stationary(const io::CoinFile& cf) {
  const StationaryAnalysis sa = stationary_states(cf.coin);
  json doc;
  doc["command"] = "stationary";
  doc["d"] = cf.coin.dim();
  doc["kernel_dim"] = sa.kernel_dim;
  doc["h1"] = sa.h1_holds;
  doc["rho_inv"] = sa.rho_inv ? io::to_json(sa.rho_inv->matrix()) : json(nullptr);
  json basis = json::array();
  for (const Matrix& b : sa.stationary_basis) basis.push_back(io::to_json(b));
  doc["stationary_basis"] = basis;
  doc["degenerate"] = sa.degenerate;
  doc["diagnostic"] = sa.diagnostic;
  return {io::dump(doc), sa.degenerate ? kExitNumerical : kExitOk};
}

Outcome cmd_drift(const io::CoinFile& cf) {
  const StationaryAnalysis sa = stationary_states(cf.coin);
  json doc;
  doc["command"] = "drift";
  doc["h1"] = sa.h1_holds;
  if (!sa.rho_inv) {
    doc["m"] = nullptr;
    doc["drift_operator_residual"] = nullptr;
    doc["J"] = nullptr;
    doc["diagnostic"] = sa.diagnostic.empty() ? "no unique stationary state; drift undefined"
                                              : sa.diagnostic;
    return {io::dump(doc), sa.degenerate ? kExitNumerical : kExitOk};
  }
  const double m = drift(cf.coin, *sa.rho_inv).m;
  const DriftOperator op = solve_drift_operator(cf.coin, m);
  doc["m"] = m;
  doc["drift_operator_residual"] = op.residual;
  doc["J"] = io::to_json(op.J);
  doc["diagnostic"] = "";
  return {io::dump(doc), kExitOk};
}

Outcome cmd_classify(const io::CoinFile& cf) {
  const ClassificationResult r = classify(cf.coin);
  json doc;
  doc["command"] = "classify";
  doc["verdict"] = std::string(to_string(r.verdict));
  doc["rule"] = r.rule;
  doc["h1"] = r.h1;
  doc["kernel_dim"] = r.kernel_dim;
  doc["m"] = r.m ? json(*r.m) : json(nullptr);
  doc["transient_state"] = r.transient_state ? io::to_json(r.transient_state->matrix()) : json(nullptr);
  doc["numerically_degenerate"] = r.numerically_degenerate;
  doc["diagnostic"] = r.diagnostic;
  return {io::dump(doc), r.numerically_degenerate ? kExitNumerical : kExitOk};
}

Outcome cmd_evolve(const RunConfig& cfg, const io::CoinFile& cf, const DensityMatrix& rho0,
                   std::ostream& err) {
  const double t = positive(cfg.t, "--t");
  const double delta = positive(cfg.delta, "--delta", t / 100.0);
  const int M = truncation(cfg, cf.coin, rho0, t);
  if (cfg.site) check_site_in_range(*cfg.site, M);
  const BlockGenerator gen(cf.coin, M);
  LatticeEvolution ev(gen, rho0, 0);

  const auto n_steps = static_cast<long>(std::ceil(t / delta - 1e-9));
  std::vector<double> times, p;
  std::vector<BlockState> profile;
  for (long k = 0; k <= n_steps; ++k) {
    const double tk = k == n_steps ? t : static_cast<double>(k) * delta;
    ev.advance_to(tk);
    times.push_back(tk);
    if (cfg.site) {
      p.push_back(ev.trace_at(*cfg.site));
    } else {
      profile.push_back(ev.state());
    }
  }

  std::ostringstream os;
  if (cfg.format == Format::Csv) {
    if (cfg.site) {
      io::write_series_csv(os, times, p);
    } else {
      io::write_profile_csv(os, profile);
    }
  } else {
    json doc;
    doc["command"] = "evolve";
    doc["truncation"] = M;
    doc["leaked_mass"] = ev.leaked_mass();
    doc["t"] = times;
    if (cfg.site) {
      doc["site"] = *cfg.site;
      doc["p"] = p;
    } else {
      json traces = json::array();
      for (const BlockState& s : profile) {
        std::vector<double> row;
        for (int i = -M; i <= M; ++i) row.push_back(s.trace_at(i));
        traces.push_back(row);
      }
      doc["sites"] = json::array({-M, M});
      doc["trace"] = traces;
    }
    os << io::dump(doc);
  }
  return {os.str(), leak_status(ev.leaked_mass(), err)};
}

Outcome cmd_skeleton(const RunConfig& cfg, const io::CoinFile& cf, const DensityMatrix& rho0,
                     std::ostream& err) {
  const double delta = positive(cfg.delta, "--delta", 1.0);
  const long N = positive_count(cfg.n, "--n", 100);
  if (N > 10'000'000) throw ValidationError("--n is too large");
  const int site = cfg.site.value_or(0);
  const int M = truncation(cfg, cf.coin, rho0, delta * static_cast<double>(N));
  check_site_in_range(site, M);
  const BlockGenerator gen(cf.coin, M);
  const SkeletonSeries s = skeleton_series(gen, rho0, 0, site, delta, static_cast<int>(N));

  std::ostringstream os;
  if (cfg.format == Format::Csv) {
    os << "n,t,p,partial_sum\n";
    for (std::size_t k = 0; k < s.p.size(); ++k) {
      os << k << ',' << io::format_real(static_cast<double>(k) * delta) << ',' << io::format_real(s.p[k])
         << ',' << io::format_real(s.partial_sums[k]) << '\n';
    }
  } else {
    json doc;
    doc["command"] = "skeleton";
    doc["delta"] = delta;
    doc["n"] = N;
    doc["site"] = site;
    doc["truncation"] = M;
    doc["partial_sums"] = s.partial_sums;
    doc["value"] = s.value();
    doc["leaked_mass"] = s.leaked_mass;
    os << io::dump(doc);
  }
  return {os.str(), leak_status(s.leaked_mass, err)};
}

Outcome cmd_integral(const RunConfig& cfg, const io::CoinFile& cf, const DensityMatrix& rho0) {
  const double T = positive(cfg.horizon, "--horizon");
  const double step = positive(cfg.delta, "--delta", kDefaultQuadStep);
  const int site = cfg.site.value_or(0);
  if (site != 0) throw ValidationError("integral: the return integral is taken at the start site 0");
  const int M = truncation(cfg, cf.coin, rho0, T);
  const BlockGenerator gen(cf.coin, M);
  const ReturnIntegral r = return_integral_series(gen, rho0, 0, T, step);

  std::ostringstream os;
  if (cfg.format == Format::Csv) {
    io::write_series_csv(os, r.times, r.p);
  } else {
    const double quarter = r.up_to(0.25 * T);
    const double half = r.up_to(0.5 * T);
    json diag;
    diag["value_at_quarter_horizon"] = quarter;
    diag["value_at_half_horizon"] = half;
    diag["ratio_full_over_quarter"] = quarter > 0.0 ? json(r.value / quarter) : json(nullptr);
    diag["relative_change_half_to_full"] = r.value > 0.0 ? json((r.value - half) / r.value) : json(nullptr);
    diag["p_at_horizon"] = r.p.back();
    json doc;
    doc["command"] = "integral";
    doc["horizon"] = T;
    doc["step"] = r.step;
    doc["truncation"] = M;
    doc["value"] = r.value;
    doc["leaked_mass"] = r.leaked_mass;
    doc["diagnostics"] = diag;
    os << io::dump(doc);
  }
  return {os.str(), kExitOk};
}

Outcome cmd_simulate(const RunConfig& cfg, const io::CoinFile& cf, const DensityMatrix& rho0) {
  const double T = positive(cfg.horizon, "--horizon", kDefaultHorizon);
  const long n = positive_count(cfg.paths, "--paths", kDefaultPaths);
  std::ostringstream os;
  if (cfg.format == Format::Csv) {
    Rng rng = path_stream(cfg.seed, 0);
    io::write_path_csv(os, simulate_path(cf.coin, 0, rho0, T, rng));
    return {os.str(), kExitOk};
  }
  json doc = io::drift_estimate_to_json(estimate_drift(cf.coin, rho0, T, n, cfg.seed));
  os << io::dump(doc);
  return {os.str(), kExitOk};
}

Outcome cmd_verify() {
  std::ostringstream os;
  bool all = true;
  for (const fixtures::Check& c : fixtures::run_reference_suite()) {
    os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.passed;
  }
  os << (all ? "all reference checks passed\n" : "some reference checks failed\n");
  return {os.str(), all ? kExitOk : kExitValidation};
}

Outcome dispatch(const RunConfig& cfg, std::ostream& err) {
  if (cfg.command == Command::Verify) return cmd_verify();
  if (cfg.coin_path.empty()) throw ValidationError("missing coin file argument");
  const io::CoinFile cf = io::read_coin_file(cfg.coin_path);
  if (cf.coin.adjustment_warning()) {
    err << "warning: H was not Hermitian; symmetrized (max adjustment "
        << io::format_real(cf.coin.hermitian_adjustment()) << ")\n";
  }
  const DensityMatrix rho0 = cf.rho0 ? *cf.rho0 : DensityMatrix::maximally_mixed(cf.coin.dim());
  switch (cfg.command) {
    case Command::Stationary: return cmd_stationary(cf);
    case Command::Drift: return cmd_drift(cf);
    case Command::Classify: return cmd_classify(cf);
    case Command::Evolve: return cmd_evolve(cfg, cf, rho0, err);
    case Command::Skeleton: return cmd_skeleton(cfg, cf, rho0, err);
    case Command::Integral: return cmd_integral(cfg, cf, rho0);
    case Command::Simulate: return cmd_simulate(cfg, cf, rho0);
    case Command::Verify: break;
  }
  return cmd_verify();
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "stationary") return Command::Stationary;
  if (name == "drift") return Command::Drift;
  if (name == "classify") return Command::Classify;
  if (name == "evolve") return Command::Evolve;
  if (name == "skeleton") return Command::Skeleton;
  if (name == "integral") return Command::Integral;
  if (name == "simulate") return Command::Simulate;
  if (name == "verify") return Command::Verify;
  return std::nullopt;
}

std::optional<Format> parse_format(std::string_view name) {
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  return std::nullopt;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Outcome result;
  try {
    result = dispatch(config, err);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }

  if (config.output_path) {
    std::ofstream file(*config.output_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << *config.output_path << '\n';
      return kExitValidation;
    }
    file << result.text;
  } else {
    out << result.text;
  }
  return result.status;
}

}  // namespace ctoqw::cli
