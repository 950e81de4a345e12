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

// Dense two-phase simplex for the tiny epigraph programs of the time
// allocation. Bland's rule throughout, so degenerate problems terminate.

#include <vector>

namespace matraj {

enum class Relation { LessEqual, Equal, GreaterEqual };

/// maximize c^T x  subject to  a_i^T x (rel_i) b_i,  x >= 0
struct LinearProgram {
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<Relation> rel;
  std::vector<double> b;

  void add_row(std::vector<double> row, Relation r, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0.0;
};

LpResult solve_lp(const LinearProgram& lp);

} // namespace matraj
