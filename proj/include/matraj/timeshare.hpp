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

#include <span>
#include <vector>

namespace matraj {

struct TimeAllocation {
  std::vector<double> durations; // seconds per pattern, sums to the budget
  double min_rate = 0.0;         // min_k average rate over the horizon
  std::vector<double> user_rates; // per-user average rate over the horizon
};

/// Row-major Γ x K rate matrix (bits/s/Hz) with its dimensions.
struct RateMatrix {
  int num_patterns = 0;
  int num_users = 0;
  std::vector<double> values;

  double at(int i, int k) const { return values[static_cast<size_t>(i * num_users + k)]; }
};

/// Maximizes r subject to (sum_i t_i R[i,k] + offsets[k]) / horizon >= r for
/// every user, sum_i t_i = budget and t >= 0. Among optimal allocations the
/// one minimizing sum_i i t_i is returned. Empty offsets means zeros.
TimeAllocation allocate_time(const RateMatrix& rates, double budget,
                             std::span<const double> offsets, double horizon);

/// Per-user averages and their minimum for a given allocation.
TimeAllocation evaluate_allocation(const RateMatrix& rates, std::span<const double> durations,
                                   std::span<const double> offsets, double horizon);

} // namespace matraj
