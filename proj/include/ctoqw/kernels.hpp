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

#include <complex>
#include <span>

namespace ctoqw::kernels {

using cplx = std::complex<double>;

/// Column-major d x d operators of the block recursion. `*_adj` are the
/// conjugate transposes, stored so the kernels never conjugate on the fly.
struct BlockOperators {
  int d = 0;
  const cplx* g0 = nullptr;
  const cplx* g0_adj = nullptr;
  const cplx* a = nullptr;
  const cplx* a_adj = nullptr;
  const cplx* c = nullptr;
  const cplx* c_adj = nullptr;
};

// Block layout: n_sites consecutive column-major d x d blocks, block s holds
// rho(s - M). Both kernels compute, for every site,
//   out[s] = G0 x[s] + x[s] G0* + A x[s-1] A* + C x[s+1] C*
// with the out-of-range neighbour terms dropped (absorbing boundary).
// `in` and `out` must not alias.

namespace serial {
void apply_block_generator(const BlockOperators& ops, std::span<const cplx> in,
                           std::span<cplx> out);
/// out = x + h * sum_k coeff[k] * stages[k], the Runge-Kutta stage combination.
void axpy_stages(std::span<const cplx> x, double h, std::span<const double> coeff,
                 std::span<const cplx* const> stages, std::span<cplx> out);
}  // namespace serial

namespace omp {
void apply_block_generator(const BlockOperators& ops, std::span<const cplx> in,
                           std::span<cplx> out);
void axpy_stages(std::span<const cplx> x, double h, std::span<const double> coeff,
                 std::span<const cplx* const> stages, std::span<cplx> out);
/// Number of threads the parallel kernels will use.
int max_threads();
}  // namespace omp

}  // namespace ctoqw::kernels
