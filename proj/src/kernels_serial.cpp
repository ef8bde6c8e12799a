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

// Reference implementations. Kept deliberately plain: the parallel kernels
// are tested against these.

#include <cassert>

#include "kernels_site.hpp"

namespace ctoqw::kernels::serial {

void apply_block_generator(const BlockOperators& ops, std::span<const cplx> in,
                           std::span<cplx> out) {
  assert(in.size() == out.size());
  const long bs = static_cast<long>(ops.d) * ops.d;
  const long n_sites = static_cast<long>(in.size()) / bs;
  const auto fn = detail::select_site(ops.d);
  for (long s = 0; s < n_sites; ++s) fn(ops, in.data(), out.data(), s, n_sites);
}

void axpy_stages(std::span<const cplx> x, double h, std::span<const double> coeff,
                 std::span<const cplx* const> stages, std::span<cplx> out) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = 0.0;
    for (std::size_t k = 0; k < coeff.size(); ++k) {
      if (coeff[k] != 0.0) acc += coeff[k] * stages[k][i];
    }
    out[i] = x[i] + h * acc;
  }
}

}  // namespace ctoqw::kernels::serial
