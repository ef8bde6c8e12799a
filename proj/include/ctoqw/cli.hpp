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
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace ctoqw::cli {

enum class Command { Stationary, Drift, Classify, Evolve, Skeleton, Integral, Simulate, Verify };
enum class Format { Json, Csv };

std::optional<Command> parse_command(std::string_view name);
std::optional<Format> parse_format(std::string_view name);

inline constexpr std::uint64_t kDefaultSeed = 1;
inline constexpr long kDefaultPaths = 400;
inline constexpr double kDefaultHorizon = 1000.0;
inline constexpr double kDefaultQuadStep = 0.05;

struct RunConfig {
  Command command = Command::Verify;
  std::string coin_path;
  std::optional<double> t;        // evolve: final time
  std::optional<double> horizon;  // integral / simulate: horizon T
  std::optional<double> delta;    // evolve: sample spacing; skeleton: step; integral: quadrature step
  std::optional<long> n;          // skeleton: number of steps
  std::optional<long> paths;      // simulate: number of paths
  std::uint64_t seed = kDefaultSeed;
  std::optional<int> site;        // target site j (start site is always 0)
  std::optional<int> trunc;       // lattice half-width M; automatic when absent
  std::optional<std::string> output_path;
  Format format = Format::Json;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

/// Executes one command. Results go to config.output_path when set, else to
/// `out`; diagnostics go to `err`. Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace ctoqw::cli
