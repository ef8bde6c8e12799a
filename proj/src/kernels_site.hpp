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

// Per-site body shared by the serial and OpenMP kernels. Internal header.

#pragma once

#include "ctoqw/kernels.hpp"

namespace ctoqw::kernels::detail {

// out += L * X * R for column-major D x D blocks (D = 0 means runtime d).
template <int D>
inline void add_sandwich(int d_rt, const cplx* l, const cplx* x, const cplx* r, cplx* out) {
  const int d = D > 0 ? D : d_rt;
  cplx tmp[16 * 16];
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      cplx s = 0.0;
      for (int k = 0; k < d; ++k) s += l[i + k * d] * x[k + j * d];
      tmp[i + j * d] = s;
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      cplx s = 0.0;
      for (int k = 0; k < d; ++k) s += tmp[i + k * d] * r[k + j * d];
      out[i + j * d] += s;
    }
  }
}

template <int D>
inline void site(const BlockOperators& ops, const cplx* in, cplx* out, long s, long n_sites) {
  const int d = D > 0 ? D : ops.d;
  const long bs = static_cast<long>(d) * d;
  const cplx* x = in + s * bs;
  cplx* y = out + s * bs;
  // G0 x + x G0*
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      cplx acc = 0.0;
      for (int k = 0; k < d; ++k) {
        acc += ops.g0[i + k * d] * x[k + j * d];
        acc += x[i + k * d] * ops.g0_adj[k + j * d];
      }
      y[i + j * d] = acc;
    }
  }
  if (s > 0) add_sandwich<D>(d, ops.a, x - bs, ops.a_adj, y);
  if (s + 1 < n_sites) add_sandwich<D>(d, ops.c, x + bs, ops.c_adj, y);
}

using SiteFn = void (*)(const BlockOperators&, const cplx*, cplx*, long, long);

inline SiteFn select_site(int d) {
  switch (d) {
    case 1: return &site<1>;
    case 2: return &site<2>;
    case 3: return &site<3>;
    case 4: return &site<4>;
    default: return &site<0>;
  }
}

}  // namespace ctoqw::kernels::detail
