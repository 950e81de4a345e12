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

#include <optional>
#include <span>

#include "matraj/channel.hpp"
#include "matraj/mmse.hpp"
#include "matraj/scenario.hpp"

namespace matraj {

struct StaticSolution {
  DeploymentPattern x;
  RateVector rates;
  double min_rate = 0.0;
};

/// Best single pattern for the max-min rate. M <= 2: exhaustive grid with the
/// last track at L. M >= 3: multi-start SCA on a smoothed minimum of the user
/// surrogates.
StaticSolution static_optimal(const Scenario& s, const SolverConfig& cfg);

enum class GridObjective { Weighted, MaxMin };

struct GridResult {
  double x1 = 0.0;
  double value = 0.0;
  std::vector<double> xs;     // scanned x_1 values
  std::vector<double> values; // objective at each x_1
};

/// Scan of x_1 over [0, L - d_min] at cfg.grid_step with x_2 = L. Requires
/// M = 2; `mu` is required for the weighted objective.
GridResult grid_oracle(const Scenario& s, GridObjective objective,
                       std::optional<std::span<const double>> mu, const SolverConfig& cfg);

} // namespace matraj
