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

// End-to-end pipelines (ideal time sharing, SSMT, static) and the parameter
// sweeps built on them.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "matraj/baseline.hpp"
#include "matraj/dual.hpp"
#include "matraj/scenario.hpp"
#include "matraj/ssmt.hpp"
#include "matraj/timeshare.hpp"

namespace matraj {

enum class Mode { Ideal, Ssmt, Static };

const char* to_string(Mode mode);
Mode parse_mode(const std::string& name);

struct SolveResult {
  Mode mode = Mode::Ideal;
  double min_rate = 0.0;
  std::vector<double> user_rates;
  int gamma = 1;     // patterns in use
  double t_swi = 0.0;
  double wall_ms = 0.0;
  bool converged = true;

  // Populated according to the mode.
  std::optional<PatternSet> patterns;
  std::optional<TimeAllocation> allocation;
  std::optional<SsmtPlan> plan;
  std::optional<StaticSolution> fixed;
};

/// Shared, speed-independent solver outputs of one scenario.
struct SolverCache {
  std::optional<PatternSet> patterns;
  std::optional<StaticSolution> fixed;
};

/// `trace` receives the ellipsoid iterations when the dual loop runs (not
/// when the cache already holds the pattern set).
SolveResult solve(const Config& config, Mode mode, SolverCache* cache = nullptr,
                  std::vector<DualTraceRow>* trace = nullptr);

/// Re-evaluates a plan computed on (possibly mis-estimated) angles against the
/// true scenario: patterns, stay durations and trajectories are kept.
SolveResult evaluate_on(const Scenario& truth, const SolveResult& planned,
                        const SolverConfig& cfg);

nlohmann::json result_to_json(const SolveResult& r, const Config& config);

enum class SweepAxis { L, VMax, N, K, AoaError, X1Curve };

const char* to_string(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);

/// "start:stop:step" (inclusive) or a comma-separated list.
std::vector<double> parse_range(const std::string& text);

/// Angle tables for the user-count sweep.
extern const std::vector<double> kSweepElevations;
extern const std::vector<double> kSweepAzimuths;

/// Base config with the axis set to `value`.
Config apply_axis(const Config& base, SweepAxis axis, double value);

struct SweepRow {
  double axis_value = 0.0;
  std::string mode;
  double min_rate = 0.0;
  std::vector<double> user_rates;
  int gamma = 0;
  double t_swi = 0.0;
  double wall_ms = 0.0;
};

/// One row per value and mode, in (value, mode) order. The x1 curve ignores
/// `modes` and emits one "curve" row per x_1.
std::vector<SweepRow> run_sweep(const Config& base, SweepAxis axis,
                                const std::vector<double>& values, const std::vector<Mode>& modes);

/// Columns: axis_value,mode,min_rate,per_user_rates,gamma,t_swi,wall_ms.
/// per_user_rates is ';'-separated. With `timing` false, wall_ms is written
/// as 0 so that reruns are byte-identical.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool timing = true);

} // namespace matraj
