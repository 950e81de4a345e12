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

// Compiled with -mavx2 -mfma. Nothing in here may run before the CPU check
// in avx2_table().

#include "matraj/kernels.hpp"

#include <immintrin.h>

namespace matraj::kernels {

namespace {

// One __m256d holds two complex doubles: [re0, im0, re1, im1].

inline __m256d load2(const cd* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }

inline void store2(cd* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d swap_re_im(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

// lanes: l0 + l1 + l2 + l3
inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// lanes: l0 - l1 + l2 - l3
inline double hsum_alt(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_sub_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

cd dotc_avx2(const cd* a, const cd* b, std::size_t n) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i);
    const __m256d vb = load2(b + i);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);             // ar*br, ai*bi
    acc_im = _mm256_fmadd_pd(va, swap_re_im(vb), acc_im); // ar*bi, ai*br
  }
  double re = hsum(acc_re);
  double im = hsum_alt(acc_im);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() - a[i].imag() * b[i].real();
  }
  return {re, im};
}

cd dotu_avx2(const cd* a, const cd* b, std::size_t n) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = load2(a + i);
    const __m256d vb = load2(b + i);
    acc_re = _mm256_fmadd_pd(va, vb, acc_re);
    acc_im = _mm256_fmadd_pd(va, swap_re_im(vb), acc_im);
  }
  double re = hsum_alt(acc_re);
  double im = hsum(acc_im);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

void axpy_avx2(cd alpha, const cd* x, cd* y, std::size_t n) {
  const __m256d p = _mm256_set1_pd(alpha.real());
  const __m256d q = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = load2(x + i);
    // [p*xr - q*xi, p*xi + q*xr]
    const __m256d prod = _mm256_fmaddsub_pd(p, vx, _mm256_mul_pd(q, swap_re_im(vx)));
    store2(y + i, _mm256_add_pd(load2(y + i), prod));
  }
  for (; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

void axpy_conj_avx2(cd alpha, const cd* x, cd* y, std::size_t n) {
  const __m256d p = _mm256_set1_pd(alpha.real());
  const __m256d q = _mm256_set1_pd(alpha.imag());
  const __m256d flip_odd = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d vx = load2(x + i);
    // fmsubadd gives [p*xr + q*xi, p*xi - q*xr]; the odd lanes need negating.
    __m256d prod = _mm256_fmsubadd_pd(p, vx, _mm256_mul_pd(q, swap_re_im(vx)));
    prod = _mm256_xor_pd(prod, flip_odd);
    store2(y + i, _mm256_add_pd(load2(y + i), prod));
  }
  for (; i < n; ++i) {
    y[i] += alpha * std::conj(x[i]);
  }
}

void her_rank1_avx2(cd* a, std::size_t n, const cd* h, double w) {
  for (std::size_t i = 0; i < n; ++i) {
    axpy_conj_avx2(w * h[i], h, a + i * n, n);
  }
}

constexpr KernelTable kAvx2{
    "avx2", dotc_avx2, dotu_avx2, axpy_avx2, axpy_conj_avx2, her_rank1_avx2,
};

} // namespace

const KernelTable& avx2_table_unchecked() { return kAvx2; }

} // namespace matraj::kernels
