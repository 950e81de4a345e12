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

#include "matraj/kernels.hpp"

#include <cassert>
#include <cstdlib>
#include <cstring>

namespace matraj::kernels {

namespace {

cd dotc_scalar(const cd* a, const cd* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

cd dotu_scalar(const cd* a, const cd* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

void axpy_scalar(cd alpha, const cd* x, cd* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

void axpy_conj_scalar(cd alpha, const cd* x, cd* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += alpha * std::conj(x[i]);
  }
}

void her_rank1_scalar(cd* a, std::size_t n, const cd* h, double w) {
  for (std::size_t i = 0; i < n; ++i) {
    axpy_conj_scalar(w * h[i], h, a + i * n, n);
  }
}

constexpr KernelTable kScalar{
    "scalar", dotc_scalar, dotu_scalar, axpy_scalar, axpy_conj_scalar, her_rank1_scalar,
};

const KernelTable& resolve() {
  const char* forced = std::getenv("MATRAJ_SIMD");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) {
    return kScalar;
  }
  if (const KernelTable* t = avx2_table()) {
    return *t;
  }
  return kScalar;
}

} // namespace

#if defined(MATRAJ_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();

const KernelTable* avx2_table() {
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table_unchecked() : nullptr;
}
#else
const KernelTable* avx2_table() { return nullptr; }
#endif

const KernelTable& scalar_table() { return kScalar; }

const KernelTable& active() {
  static const KernelTable& table = resolve();
  return table;
}

cd dotc(std::span<const cd> a, std::span<const cd> b) {
  assert(a.size() == b.size());
  return active().dotc(a.data(), b.data(), a.size());
}

cd dotu(std::span<const cd> a, std::span<const cd> b) {
  assert(a.size() == b.size());
  return active().dotu(a.data(), b.data(), a.size());
}

void axpy(cd alpha, std::span<const cd> x, std::span<cd> y) {
  assert(x.size() == y.size());
  active().axpy(alpha, x.data(), y.data(), x.size());
}

void axpy_conj(cd alpha, std::span<const cd> x, std::span<cd> y) {
  assert(x.size() == y.size());
  active().axpy_conj(alpha, x.data(), y.data(), x.size());
}

void her_rank1(std::span<cd> a, std::size_t n, std::span<const cd> h, double w) {
  assert(a.size() == n * n && h.size() == n);
  active().her_rank1(a.data(), n, h.data(), w);
}

} // namespace matraj::kernels
