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

// Randomized property checks with brute-force oracles. Used by the
// `validate` subcommand and the test suites.

#include <cstdint>
#include <string>
#include <vector>

#include "matraj/scenario.hpp"
#include "matraj/timeshare.hpp"

namespace matraj {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct PropertyOptions {
  int channel_instances = 1000;
  int beamformer_instances = 20;
  int beamformers_per_instance = 1000;
  int surrogate_pairs = 1000;
  int sca_starts = 100;
  int lp_instances = 60;
  int ordering_instances = 10; // per pattern count 1..8
  int coupling_segments = 1000;
  int coupling_samples = 10000;
  int sandwich_scenarios = 50;
  std::uint64_t seed = 7;
};

PropertyResult check_channel_norm(const Config& c, const PropertyOptions& o);
PropertyResult check_mmse_dominance(const Config& c, const PropertyOptions& o);
PropertyResult check_surrogate_bounds(const Config& c, const PropertyOptions& o);
PropertyResult check_sca_monotone(const Config& c, const PropertyOptions& o);
PropertyResult check_lp_vs_grid(const Config& c, const PropertyOptions& o);
PropertyResult check_ordering_exact(const Config& c, const PropertyOptions& o);
PropertyResult check_no_coupling(const Config& c, const PropertyOptions& o);
PropertyResult check_mode_sandwich(const Config& c, const PropertyOptions& o);

std::vector<PropertyResult> run_property_suite(const Config& c, const PropertyOptions& o = {});

/// Max-min time sharing by exhaustive search over the simplex (step
/// budget/steps), refined by repeated zooming around the incumbent. Oracle
/// for allocate_time with up to three patterns.
double simplex_grid_max_min(const RateMatrix& rates, double budget,
                            const std::vector<double>& offsets, double horizon, int steps = 200);

/// Shortest open path length over all permutations.
double brute_force_path_length(const std::vector<std::vector<double>>& dist);

} // namespace matraj
