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

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "matraj/kernels.hpp"

using matraj::kernels::cd;
using matraj::kernels::KernelTable;

namespace {

std::vector<cd> random_vector(std::mt19937_64& rng, size_t n) {
  std::normal_distribution<double> d;
  std::vector<cd> v(n);
  for (auto& x : v) {
    x = {d(rng), d(rng)};
  }
  return v;
}

double scale_of(const std::vector<cd>& a) {
  double s = 1.0;
  for (const auto& x : a) {
    s += std::abs(x);
  }
  return s;
}

void check_close(const std::vector<cd>& a, const std::vector<cd>& b, double tol) {
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i] - b[i]) <= tol);
  }
}

} // namespace

TEST_CASE("active table is one of the compiled variants") {
  const KernelTable& t = matraj::kernels::active();
  const KernelTable* simd = matraj::kernels::avx2_table();
  CHECK((&t == &matraj::kernels::scalar_table() || (simd != nullptr && &t == simd)));
}

TEST_CASE("scalar kernels on a hand example") {
  const KernelTable& s = matraj::kernels::scalar_table();
  const std::vector<cd> a{{1, 2}, {0, -1}};
  const std::vector<cd> b{{3, 0}, {1, 1}};
  // conj(1+2j)*3 + conj(-j)*(1+j) = 3-6j + j(1+j) = 2-5j
  CHECK(s.dotc(a.data(), b.data(), 2) == cd(2, -5));
  // (1+2j)*3 + (-j)(1+j) = 3+6j - j + 1 = 4+5j
  CHECK(s.dotu(a.data(), b.data(), 2) == cd(4, 5));

  std::vector<cd> m(4, cd(0, 0));
  s.her_rank1(m.data(), 2, a.data(), 2.0);
  CHECK(m[0] == cd(10, 0));
  CHECK(m[1] == cd(-4, 2)); // 2 (1+2j) conj(-j) = 2 (1+2j) j
  CHECK(m[2] == std::conj(m[1]));
  CHECK(m[3] == cd(2, 0));
}

TEST_CASE("AVX2 kernels match the scalar reference") {
  const KernelTable* simd = matraj::kernels::avx2_table();
  if (simd == nullptr) {
    SKIP("AVX2 variant not available on this build or CPU");
  }
  const KernelTable& ref = matraj::kernels::scalar_table();
  std::mt19937_64 rng(3);
  for (size_t n = 0; n <= 41; ++n) {
    const auto a = random_vector(rng, n);
    const auto b = random_vector(rng, n);
    const double tol = 1e-13 * scale_of(a) * scale_of(b);
    CHECK(std::abs(simd->dotc(a.data(), b.data(), n) - ref.dotc(a.data(), b.data(), n)) <= tol);
    CHECK(std::abs(simd->dotu(a.data(), b.data(), n) - ref.dotu(a.data(), b.data(), n)) <= tol);

    const cd alpha(0.3, -1.7);
    auto y1 = b;
    auto y2 = b;
    simd->axpy(alpha, a.data(), y1.data(), n);
    ref.axpy(alpha, a.data(), y2.data(), n);
    check_close(y1, y2, 1e-14 * scale_of(a) * 4);
    y1 = b;
    y2 = b;
    simd->axpy_conj(alpha, a.data(), y1.data(), n);
    ref.axpy_conj(alpha, a.data(), y2.data(), n);
    check_close(y1, y2, 1e-14 * scale_of(a) * 4);

    auto m1 = random_vector(rng, n * n);
    auto m2 = m1;
    simd->her_rank1(m1.data(), n, a.data(), 0.7);
    ref.her_rank1(m2.data(), n, a.data(), 0.7);
    check_close(m1, m2, 1e-13 * scale_of(a) * scale_of(a));
  }
}
