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

#include "matraj/timeshare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matraj/lp.hpp"

namespace matraj {

namespace {

// Relative slack allowed on r* when the tie-breaking program fixes it.
constexpr double kTieSlack = 1e-12;

void check_inputs(const RateMatrix& rates, double budget, std::span<const double> offsets,
                  double horizon) {
  if (rates.num_patterns < 1 || rates.num_users < 1 ||
      rates.values.size() != static_cast<size_t>(rates.num_patterns * rates.num_users)) {
    throw std::invalid_argument("allocate_time: malformed rate matrix");
  }
  if (!(budget >= 0.0)) {
    throw std::invalid_argument("allocate_time: budget must be nonnegative");
  }
  if (!(horizon > 0.0)) {
    throw std::invalid_argument("allocate_time: horizon must be positive");
  }
  if (!offsets.empty() && offsets.size() != static_cast<size_t>(rates.num_users)) {
    throw std::invalid_argument("allocate_time: offsets size must equal the user count");
  }
  for (double v : rates.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("allocate_time: rates must be finite and nonnegative");
    }
  }
  for (double v : offsets) {
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("allocate_time: offsets must be finite and nonnegative");
    }
  }
}

// Variables: t_0 .. t_{G-1}, r.
LinearProgram epigraph(const RateMatrix& rates, double budget, std::span<const double> offsets,
                       double horizon) {
  const int g = rates.num_patterns;
  LinearProgram lp;
  lp.c.assign(static_cast<size_t>(g + 1), 0.0);
  for (int k = 0; k < rates.num_users; ++k) {
    std::vector<double> row(static_cast<size_t>(g + 1));
    for (int i = 0; i < g; ++i) {
      row[static_cast<size_t>(i)] = -rates.at(i, k);
    }
    row[static_cast<size_t>(g)] = horizon;
    lp.add_row(std::move(row), Relation::LessEqual,
               offsets.empty() ? 0.0 : offsets[static_cast<size_t>(k)]);
  }
  std::vector<double> sum(static_cast<size_t>(g + 1), 1.0);
  sum[static_cast<size_t>(g)] = 0.0;
  lp.add_row(std::move(sum), Relation::Equal, budget);
  return lp;
}

} // namespace

TimeAllocation evaluate_allocation(const RateMatrix& rates, std::span<const double> durations,
                                   std::span<const double> offsets, double horizon) {
  TimeAllocation out;
  out.durations.assign(durations.begin(), durations.end());
  out.user_rates.assign(static_cast<size_t>(rates.num_users), 0.0);
  for (int k = 0; k < rates.num_users; ++k) {
    double acc = offsets.empty() ? 0.0 : offsets[static_cast<size_t>(k)];
    for (int i = 0; i < rates.num_patterns; ++i) {
      acc += durations[static_cast<size_t>(i)] * rates.at(i, k);
    }
    out.user_rates[static_cast<size_t>(k)] = acc / horizon;
  }
  out.min_rate = *std::min_element(out.user_rates.begin(), out.user_rates.end());
  return out;
}

TimeAllocation allocate_time(const RateMatrix& rates, double budget,
                             std::span<const double> offsets, double horizon) {
  check_inputs(rates, budget, offsets, horizon);
  const int g = rates.num_patterns;

  LinearProgram lp = epigraph(rates, budget, offsets, horizon);
  lp.c[static_cast<size_t>(g)] = 1.0;
  const LpResult first = solve_lp(lp);
  if (first.status != LpStatus::Optimal) {
    throw std::runtime_error("allocate_time: epigraph program not solved");
  }
  const double r_star = first.x[static_cast<size_t>(g)];

  // Tie-break: earliest-pattern-heavy allocation among the optimal ones.
  LinearProgram tie = epigraph(rates, budget, offsets, horizon);
  for (int i = 0; i < g; ++i) {
    tie.c[static_cast<size_t>(i)] = -static_cast<double>(i);
  }
  std::vector<double> fix(static_cast<size_t>(g + 1), 0.0);
  fix[static_cast<size_t>(g)] = 1.0;
  tie.add_row(std::move(fix), Relation::GreaterEqual,
              r_star - kTieSlack * std::max(1.0, std::abs(r_star)));
  const LpResult second = solve_lp(tie);
  const LpResult& chosen = second.status == LpStatus::Optimal ? second : first;

  std::vector<double> t(chosen.x.begin(), chosen.x.begin() + g);
  for (double& v : t) {
    v = std::max(v, 0.0);
  }
  // Put the rounding residue of sum(t) = budget on the longest stay.
  double total = 0.0;
  for (double v : t) {
    total += v;
  }
  auto longest = std::max_element(t.begin(), t.end());
  *longest = std::max(0.0, *longest + (budget - total));
  return evaluate_allocation(rates, t, offsets, horizon);
}

} // namespace matraj
