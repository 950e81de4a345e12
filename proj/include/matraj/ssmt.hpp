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

// Successive stay-then-move trajectory: hold each pattern of the time-sharing
// solution in turn and drive the tracks between consecutive patterns at full
// speed.

#include <limits>
#include <span>
#include <vector>

#include "json.hpp"
#include "matraj/baseline.hpp"
#include "matraj/channel.hpp"
#include "matraj/dual.hpp"
#include "matraj/scenario.hpp"
#include "matraj/timeshare.hpp"

namespace matraj {

/// Switching time between patterns that the tracks cannot travel.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

/// max_m |a_m - b_m| / V_max; kUnreachable when V_max = 0 and a != b.
double switching_time(const DeploymentPattern& a, const DeploymentPattern& b, double v_max);

struct SwitchSegment {
  DeploymentPattern from;
  DeploymentPattern to;
  double speed = 0.0;
  double min_separation = 0.0;
  double duration = 0.0;
  std::vector<int> direction;   // +1 / -1 per track
  std::vector<double> arrival;  // per-track arrival time, <= duration
};

SwitchSegment make_segment(const DeploymentPattern& from, const DeploymentPattern& to,
                           const ArrayGeometry& g);

/// Every track moves toward its target at V_max and stops on arrival. Throws
/// NumericalError if the spacing constraint is violated, which feasible
/// endpoints rule out.
DeploymentPattern transition_pattern(const SwitchSegment& seg, double t);

struct CouplingCheck {
  bool ok = true;
  double min_distance = 0.0; // smallest neighbour gap seen (infinity for M = 1)
};

/// Gap check at every arrival breakpoint plus `samples` uniform times.
CouplingCheck verify_no_coupling(const SwitchSegment& seg, int samples);

/// Breakpoint times of the segment: 0, each arrival time, duration (sorted,
/// unique).
std::vector<double> segment_breakpoints(const SwitchSegment& seg);

/// Integral of log2(1 + gamma_k) over the segment (bits/Hz), composite
/// trapezoid on cfg.quadrature_samples_per_segment uniform nodes plus the
/// breakpoints.
std::vector<double> switching_rates(const Scenario& s, const SwitchSegment& seg,
                                    const SolverConfig& cfg);
double switching_rate(const Scenario& s, const SwitchSegment& seg, int k, const SolverConfig& cfg);

struct Ordering {
  std::vector<int> order;
  double t_swi = 0.0;
  bool exact = true; // false when the heuristic path was used
};

/// Shortest open path through all patterns under the Chebyshev switching
/// time. Exact (Held-Karp over every start) for up to kHeldKarpLimit patterns,
/// nearest neighbour plus 2-opt beyond. Ties go to the lexicographically
/// smallest visiting order.
inline constexpr int kHeldKarpLimit = 20;
Ordering order_patterns(std::span<const DeploymentPattern> patterns, double v_max);
Ordering order_patterns(const PatternSet& ps, double v_max);

enum class PlanMode { Dynamic, StaticFallback };

struct SsmtPlan {
  PlanMode mode = PlanMode::StaticFallback;
  std::vector<int> order;                // indices into the pattern set
  std::vector<DeploymentPattern> stays;  // patterns in visiting order
  std::vector<double> stay_durations;    // seconds, aligned with stays
  std::vector<SwitchSegment> segments;   // stays.size() - 1 transitions
  std::vector<double> switching_rates;   // bits/Hz per user, summed over segments
  double t_swi = 0.0;
  double min_rate = 0.0;
  std::vector<double> user_rates;        // average over the horizon
};

/// Dynamic plan when the tour fits in the horizon and its optimized rate beats
/// the static baseline; otherwise the static pattern for the whole horizon.
SsmtPlan plan_ssmt(const Scenario& s, const PatternSet& ps, const StaticSolution& fixed,
                   const SolverConfig& cfg);

/// Replayable description: stays with durations, then segments with per-track
/// velocities and arrival times.
nlohmann::json plan_to_json(const SsmtPlan& plan);

const char* to_string(PlanMode mode);

} // namespace matraj
