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

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ctoqw/lattice.hpp"
#include "ctoqw/model.hpp"
#include "ctoqw/trajectory.hpp"

namespace ctoqw::io {

using json = nlohmann::json;

/// Coin file:
///   {"d": 2, "C": [[[re, im], ...], ...], "A": ..., "H": ...}
/// Matrices are row-major lists of rows; every scalar is a [re, im] pair.
/// Optional keys: "rho0" (initial internal state, same format) and
/// "description" (free text, ignored by the numerics).
struct CoinFile {
  Coin coin;
  std::optional<DensityMatrix> rho0;
  std::string description;
};

CoinFile parse_coin(const json& doc);
CoinFile read_coin_file(const std::filesystem::path& path);

json to_json(cplx z);
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& rows, Eigen::Index d, const char* name);
json coin_to_json(const Coin& coin, const std::optional<DensityMatrix>& rho0 = std::nullopt,
                  const std::string& description = "");

/// 17 significant digits, round-trip safe.
std::string format_real(double x);

/// Deterministic JSON text: keys in insertion order as stored by nlohmann
/// (sorted), floats through format_real, two-space indentation.
std::string dump(const json& doc);

// CSV exports, deterministic row order, header line first.
void write_series_csv(std::ostream& os, const std::vector<double>& t, const std::vector<double>& p);
void write_profile_csv(std::ostream& os, const std::vector<BlockState>& states);
void write_path_csv(std::ostream& os, const TrajectoryPath& path);

json drift_estimate_to_json(const DriftEstimate& est);

}  // namespace ctoqw::io
