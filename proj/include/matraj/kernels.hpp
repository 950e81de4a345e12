// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The matraj authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Complex double-precision inner loops used by the channel, MMSE and
// surrogate code. Each kernel has a portable scalar reference and, on x86-64
// builds, an AVX2/FMA variant. The variant is chosen once at first use from
// the running CPU; MATRAJ_SIMD=scalar in the environment forces the
// reference path.

#include <complex>
#include <cstddef>
#include <span>

namespace matraj::kernels {

using cd = std::complex<double>;

struct KernelTable {
  const char* name;
  // sum_i conj(a_i) * b_i
  cd (*dotc)(const cd* a, const cd* b, std::size_t n);
  // sum_i a_i * b_i
  cd (*dotu)(const cd* a, const cd* b, std::size_t n);
  // y_i += alpha * x_i
  void (*axpy)(cd alpha, const cd* x, cd* y, std::size_t n);
  // y_i += alpha * conj(x_i)
  void (*axpy_conj)(cd alpha, const cd* x, cd* y, std::size_t n);
  // A += w * h h^H, A is n x n row-major
  void (*her_rank1)(cd* a, std::size_t n, const cd* h, double w);
};

const KernelTable& scalar_table();

/// AVX2 table, or nullptr when not compiled in or unsupported by this CPU.
const KernelTable* avx2_table();

/// Table used by the library. Resolved once, thread-safe.
const KernelTable& active();

cd dotc(std::span<const cd> a, std::span<const cd> b);
cd dotu(std::span<const cd> a, std::span<const cd> b);
void axpy(cd alpha, std::span<const cd> x, std::span<cd> y);
void axpy_conj(cd alpha, std::span<const cd> x, std::span<cd> y);
void her_rank1(std::span<cd> a, std::size_t n, std::span<const cd> h, double w);

} // namespace matraj::kernels
