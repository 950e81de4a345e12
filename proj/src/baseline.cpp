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

#include "matraj/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matraj/dual.hpp"
#include "matraj/parallel.hpp"
#include "matraj/sca.hpp"

namespace matraj {

namespace {

// Continuation schedule for the smoothed minimum (bits/s/Hz).
constexpr double kSoftminTaus[] = {1e-2, 1e-3, 1e-4};

StaticSolution make_solution(const Scenario& s, DeploymentPattern x) {
  StaticSolution out;
  out.x = std::move(x);
  out.rates = rate_vector(s, out.x);
  out.min_rate = out.rates.min_rate();
  return out;
}

} // namespace

GridResult grid_oracle(const Scenario& s, GridObjective objective,
                       std::optional<std::span<const double>> mu, const SolverConfig& cfg) {
  const auto& g = s.geometry;
  if (g.num_tracks != 2) {
    throw std::invalid_argument("grid_oracle: requires exactly two tracks");
  }
  if (objective == GridObjective::Weighted &&
      (!mu || mu->size() != static_cast<size_t>(s.num_users()))) {
    throw std::invalid_argument("grid_oracle: weighted objective needs one weight per user");
  }
  const double hi = g.span - g.min_separation;
  const auto count = static_cast<size_t>(std::floor(hi / cfg.grid_step + 1e-9)) + 1;
  GridResult out;
  out.xs.resize(count);
  out.values.resize(count);
  parallel_for(count, [&](size_t i) {
    const double x1 = std::min(static_cast<double>(i) * cfg.grid_step, hi);
    const auto r = rate_vector(s, DeploymentPattern{{x1, g.span}});
    double v = 0.0;
    if (objective == GridObjective::MaxMin) {
      v = r.min_rate();
    } else {
      for (size_t k = 0; k < r.rates.size(); ++k) {
        v += (*mu)[k] * r.rates[k];
      }
    }
    out.xs[i] = x1;
    out.values[i] = v;
  });
  const auto best = std::max_element(out.values.begin(), out.values.end());
  out.value = *best;
  out.x1 = out.xs[static_cast<size_t>(best - out.values.begin())];
  return out;
}

StaticSolution static_optimal(const Scenario& s, const SolverConfig& cfg) {
  const auto& g = s.geometry;
  if (g.num_tracks == 1) {
    return make_solution(s, DeploymentPattern{{g.span}});
  }
  if (g.num_tracks == 2) {
    const auto grid = grid_oracle(s, GridObjective::MaxMin, std::nullopt, cfg);
    return make_solution(s, DeploymentPattern{{grid.x1, g.span}});
  }

  // M >= 3: SCA on a smoothed minimum, tightened in stages, from every start.
  const auto starts = start_patterns(g, cfg);
  std::vector<StaticSolution> found(starts.size());
  parallel_for(starts.size(), [&](size_t i) {
    DeploymentPattern x = starts[i];
    for (double tau : kSoftminTaus) {
      x = sca_maximize(s, softmin_utility(s.num_users(), tau), x, cfg).x;
    }
    found[i] = make_solution(s, shift_to_right_edge(x, g));
  });
  // Highest min rate; exact ties go to the lexicographically smallest pattern.
  size_t best = 0;
  for (size_t i = 1; i < found.size(); ++i) {
    if (found[i].min_rate > found[best].min_rate ||
        (found[i].min_rate == found[best].min_rate && found[i].x < found[best].x)) {
      best = i;
    }
  }
  return found[best];
}

} // namespace matraj
