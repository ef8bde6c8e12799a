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
#include <string>
#include <string_view>

#include "ctoqw/auxiliary.hpp"

namespace ctoqw {

enum class Verdict { Recurrent, Transient, PartiallyRecurrent, Undetermined };

std::string_view to_string(Verdict v);

// Rule tags naming the criterion branch that produced a verdict.
namespace rule {
inline constexpr std::string_view kUniqueZeroDrift = "corR-1";
inline constexpr std::string_view kUniqueNonzeroDrift = "corR-2";
inline constexpr std::string_view kDim2AllTransient = "2EiCriteria-2.1a";
inline constexpr std::string_view kDim2AllRecurrent = "2EiCriteria-2.1b";
inline constexpr std::string_view kDim2Partial = "2EiCriteria-2.1c";
inline constexpr std::string_view kDim2ScalarCoin = "2EiCriteria-2.2";
inline constexpr std::string_view kDiagonalUnique = "LastProp-i";
inline constexpr std::string_view kNone = "none";
}  // namespace rule

/// Decision tolerance, applied after rescaling the coin so that
/// ||C||_F^2 + ||A||_F^2 = 1 (and H by the same time scale).
inline constexpr double kClassifyTol = 1e-9;

struct ClassificationResult {
  Verdict verdict = Verdict::Undetermined;
  /// Pure state |u_j><u_j| for which the walk is transient; PartiallyRecurrent only.
  std::optional<DensityMatrix> transient_state;
  std::string rule{rule::kNone};
  /// Drift of the original (unscaled) coin, when (H1) holds.
  std::optional<double> m;
  bool h1 = false;
  int kernel_dim = 0;
  /// The stationary analysis hit a degenerate kernel; verdict is Undetermined.
  bool numerically_degenerate = false;
  std::string diagnostic;
};

/// Recurrence verdict for site 0 (and, by homogeneity, every site).
ClassificationResult classify(const Coin& coin);

/// Shortcut for 2x2 coins whose C and A are diagonal in a common orthonormal
/// basis. Throws ValidationError when that precondition fails.
ClassificationResult classify_diagonal(const Coin& coin);

}  // namespace ctoqw
