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

#include "matraj/linalg.hpp"

#include <cmath>

#include "matraj/kernels.hpp"

namespace matraj {

CMatrix CMatrix::identity(int n) {
  CMatrix m(n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

void CMatrix::add_rank_one(std::span<const cd> h, double w) {
  kernels::her_rank1(data_, static_cast<size_t>(n_), h, w);
}

CVector CMatrix::multiply(std::span<const cd> x) const {
  CVector y(static_cast<size_t>(n_));
  for (int i = 0; i < n_; ++i) {
    y[static_cast<size_t>(i)] = kernels::dotu(row(i), x);
  }
  return y;
}

Cholesky::Cholesky(const CMatrix& a) : lower_(a.size()) {
  const int n = a.size();
  auto data = lower_.data();
  for (int j = 0; j < n; ++j) {
    std::span<const cd> row_j = data.subspan(static_cast<size_t>(j) * n, static_cast<size_t>(j));
    double d = a(j, j).real() - squared_norm(row_j);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw NumericalError("Cholesky: matrix is not positive definite (pivot " +
                           std::to_string(j) + ")");
    }
    const double ljj = std::sqrt(d);
    lower_(j, j) = ljj;
    for (int i = j + 1; i < n; ++i) {
      std::span<const cd> row_i = data.subspan(static_cast<size_t>(i) * n, static_cast<size_t>(j));
      // L(i,j) = (A(i,j) - sum_p L(i,p) conj(L(j,p))) / L(j,j)
      lower_(i, j) = (a(i, j) - kernels::dotc(row_j, row_i)) / ljj;
    }
  }
}

CVector Cholesky::solve(std::span<const cd> b) const {
  const int n = lower_.size();
  CVector y(b.begin(), b.end());
  // L y = b
  for (int i = 0; i < n; ++i) {
    const auto row = lower_.row(i).first(static_cast<size_t>(i));
    const auto done = std::span<const cd>(y).first(static_cast<size_t>(i));
    y[static_cast<size_t>(i)] = (y[static_cast<size_t>(i)] - kernels::dotu(row, done)) / lower_(i, i);
  }
  // L^H x = y, column-oriented so every update walks a row of L
  for (int i = n - 1; i >= 0; --i) {
    const cd xi = y[static_cast<size_t>(i)] / lower_(i, i);
    y[static_cast<size_t>(i)] = xi;
    kernels::axpy_conj(-xi, lower_.row(i).first(static_cast<size_t>(i)),
                       std::span<cd>(y).first(static_cast<size_t>(i)));
  }
  return y;
}

double squared_norm(std::span<const cd> v) {
  double s = 0.0;
  for (const cd& z : v) {
    s += std::norm(z);
  }
  return s;
}

} // namespace matraj
