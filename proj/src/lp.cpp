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

#include "matraj/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace matraj {

void LinearProgram::add_row(std::vector<double> row, Relation r, double rhs) {
  a.push_back(std::move(row));
  rel.push_back(r);
  b.push_back(rhs);
}

namespace {

constexpr double kEps = 1e-11;

class Tableau {
public:
  // Rows 0..m-1 are constraints, row m is the objective (reduced costs of a
  // maximization, stored as z_j - c_j so that negative entries can enter).
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (n_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * (n_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, n_); }
  double rhs(std::size_t i) const { return at(i, n_); }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) {
      at(r, j) /= p;
    }
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) {
        continue;
      }
      const double f = at(i, c);
      if (f == 0.0) {
        continue;
      }
      for (std::size_t j = 0; j <= n_; ++j) {
        at(i, j) -= f * at(r, j);
      }
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  /// Simplex iterations with Bland's rule over columns [0, usable).
  /// Returns false when unbounded.
  bool optimize(std::size_t usable) {
    for (;;) {
      std::size_t enter = usable;
      for (std::size_t j = 0; j < usable; ++j) {
        if (at(m_, j) < -kEps) {
          enter = j;
          break;
        }
      }
      if (enter == usable) {
        return true;
      }
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double aij = at(i, enter);
        if (aij > kEps) {
          const double ratio = rhs(i) / aij;
          if (ratio < best - kEps ||
              (ratio <= best + kEps && leave < m_ && basis_[i] < basis_[leave])) {
            best = std::min(best, ratio);
            leave = i;
          }
        }
      }
      if (leave == m_) {
        return false;
      }
      pivot(leave, enter);
    }
  }

private:
  std::size_t m_;
  std::size_t n_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

} // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t n = lp.c.size();
  const std::size_t m = lp.a.size();
  if (lp.rel.size() != m || lp.b.size() != m) {
    throw std::invalid_argument("solve_lp: row count mismatch");
  }

  // Normalize to b >= 0, then count slack/surplus and artificial columns.
  std::vector<std::vector<double>> a = lp.a;
  std::vector<Relation> rel = lp.rel;
  std::vector<double> b = lp.b;
  std::size_t num_slack = 0;
  std::size_t num_art = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != n) {
      throw std::invalid_argument("solve_lp: row width mismatch");
    }
    if (b[i] < 0.0) {
      for (double& v : a[i]) {
        v = -v;
      }
      b[i] = -b[i];
      if (rel[i] == Relation::LessEqual) {
        rel[i] = Relation::GreaterEqual;
      } else if (rel[i] == Relation::GreaterEqual) {
        rel[i] = Relation::LessEqual;
      }
    }
    if (rel[i] != Relation::Equal) {
      ++num_slack;
    }
    if (rel[i] != Relation::LessEqual) {
      ++num_art;
    }
  }

  const std::size_t art_begin = n + num_slack;
  Tableau tab(m, art_begin + num_art);
  std::size_t slack = n;
  std::size_t art = art_begin;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      tab.at(i, j) = a[i][j];
    }
    tab.rhs(i) = b[i];
    switch (rel[i]) {
    case Relation::LessEqual:
      tab.at(i, slack) = 1.0;
      tab.basis()[i] = slack++;
      break;
    case Relation::GreaterEqual:
      tab.at(i, slack++) = -1.0;
      tab.at(i, art) = 1.0;
      tab.basis()[i] = art++;
      break;
    case Relation::Equal:
      tab.at(i, art) = 1.0;
      tab.basis()[i] = art++;
      break;
    }
  }

  LpResult res;
  // Phase I: maximize -sum(artificials).
  if (num_art > 0) {
    for (std::size_t j = art_begin; j < tab.cols(); ++j) {
      tab.at(m, j) = 1.0;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] >= art_begin) {
        for (std::size_t j = 0; j <= tab.cols(); ++j) {
          tab.at(m, j) -= tab.at(i, j);
        }
      }
    }
    tab.optimize(tab.cols());
    if (tab.rhs(m) < -1e-9 * (1.0 + *std::max_element(b.begin(), b.end()))) {
      res.status = LpStatus::Infeasible;
      return res;
    }
    // Drive remaining (zero-level) artificials out of the basis.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < art_begin) {
        continue;
      }
      for (std::size_t j = 0; j < art_begin; ++j) {
        if (std::abs(tab.at(i, j)) > kEps) {
          tab.pivot(i, j);
          break;
        }
      }
      // A row with no usable pivot is redundant; its artificial stays basic
      // at zero and is never allowed to re-enter.
    }
  }

  // Phase II objective row: z_j - c_j over the original columns.
  for (std::size_t j = 0; j <= tab.cols(); ++j) {
    tab.at(m, j) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    tab.at(m, j) = -lp.c[j];
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t bj = tab.basis()[i];
    const double cb = bj < n ? lp.c[bj] : 0.0;
    if (cb != 0.0) {
      for (std::size_t j = 0; j <= tab.cols(); ++j) {
        tab.at(m, j) += cb * tab.at(i, j);
      }
    }
  }
  if (!tab.optimize(art_begin)) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  res.status = LpStatus::Optimal;
  res.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis()[i] < n) {
      res.x[tab.basis()[i]] = std::max(0.0, tab.rhs(i));
    }
  }
  res.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    res.objective += lp.c[j] * res.x[j];
  }
  return res;
}

} // namespace matraj
