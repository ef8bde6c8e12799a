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

// ctoqw <command> <coin.json> [options]

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ctoqw/cli.hpp"

int main(int argc, char** argv) {
  using namespace ctoqw::cli;

  CLI::App app{"Continuous-time open quantum walks on the integer line"};
  app.set_help_flag("-h,--help", "Print usage");

  std::string command;
  std::string coin_path;
  std::string format = "json";
  std::optional<double> t, horizon, delta;
  std::optional<long> n, paths;
  std::optional<int> site, trunc;
  std::optional<std::string> out_path;
  std::uint64_t seed = kDefaultSeed;

  app.add_option("command", command,
                 "stationary | drift | classify | evolve | skeleton | integral | simulate | verify")
      ->required();
  app.add_option("coin", coin_path, "Coin JSON file (not needed for verify)");
  app.add_option("--t", t, "evolve: final time");
  app.add_option("--horizon", horizon, "integral / simulate: horizon");
  app.add_option("--delta", delta, "evolve: sample spacing; skeleton: step; integral: quadrature step");
  app.add_option("--n", n, "skeleton: number of steps (default 100)");
  app.add_option("--paths", paths, "simulate: number of paths (default 400)");
  app.add_option("--seed", seed, "simulate: 64-bit seed (default 1)");
  app.add_option("--site", site, "target site (evolve, skeleton)");
  app.add_option("--trunc", trunc, "lattice half-width M (automatic when absent)");
  app.add_option("--out", out_path, "write the result here instead of stdout");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  const auto cmd = parse_command(command);
  if (!cmd) {
    std::cerr << "error: unknown command '" << command << "'\n";
    return kExitValidation;
  }

  RunConfig cfg;
  cfg.command = *cmd;
  cfg.coin_path = coin_path;
  cfg.t = t;
  cfg.horizon = horizon;
  cfg.delta = delta;
  cfg.n = n;
  cfg.paths = paths;
  cfg.seed = seed;
  cfg.site = site;
  cfg.trunc = trunc;
  cfg.output_path = out_path;
  cfg.format = *parse_format(format);
  return run(cfg, std::cout, std::cerr);
}
