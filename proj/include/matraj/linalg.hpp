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

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace matraj {

using cd = std::complex<double>;
using CVector = std::vector<cd>;

/// Signals a numerical breakdown that the model says cannot happen
/// (non-positive-definite interference matrix, collapsed ellipsoid, ...).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Small dense complex matrix, row-major.
class CMatrix {
public:
  CMatrix() = default;
  explicit CMatrix(int n) : n_(n), data_(static_cast<size_t>(n) * static_cast<size_t>(n)) {}

  static CMatrix identity(int n);

  int size() const { return n_; }
  cd& operator()(int i, int j) { return data_[index(i, j)]; }
  const cd& operator()(int i, int j) const { return data_[index(i, j)]; }
  std::span<cd> data() { return data_; }
  std::span<const cd> data() const { return data_; }
  std::span<const cd> row(int i) const {
    return std::span<const cd>(data_).subspan(index(i, 0), static_cast<size_t>(n_));
  }

  /// this += w * h h^H
  void add_rank_one(std::span<const cd> h, double w);

  CVector multiply(std::span<const cd> x) const;

private:
  size_t index(int i, int j) const {
    return static_cast<size_t>(i) * static_cast<size_t>(n_) + static_cast<size_t>(j);
  }

  int n_ = 0;
  CVector data_;
};

/// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix.
class Cholesky {
public:
  /// Throws NumericalError when `a` is not numerically positive definite.
  explicit Cholesky(const CMatrix& a);

  CVector solve(std::span<const cd> b) const;

private:
  CMatrix lower_;
};

double squared_norm(std::span<const cd> v);

} // namespace matraj
