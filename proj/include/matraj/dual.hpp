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

// Lagrangian dual of the max-min time-sharing problem, minimized over the
// weight simplex with the ellipsoid method.

#include <iosfwd>
#include <span>
#include <vector>

#include "matraj/channel.hpp"
#include "matraj/mmse.hpp"
#include "matraj/scenario.hpp"

namespace matraj {

struct DualState {
  std::vector<double> mu;
  std::vector<double> b; // K x K, row-major, symmetric positive definite
  int iteration = 0;

  int size() const { return static_cast<int>(mu.size()); }
  double b_at(int i, int j) const { return b[static_cast<size_t>(i * size() + j)]; }

  /// mu = 1/K, B = K I
  static DualState initial(int num_users);
};

/// Relative distance to f(mu) within which a stationary pattern is carried
/// forward as a warm start for later weights.
inline constexpr double kWarmStartBand = 0.1;

struct PatternSet {
  std::vector<DeploymentPattern> patterns; // lexicographically sorted
  std::vector<RateVector> rates;           // one per pattern
  std::vector<double> objectives;          // weighted objective of each pattern
  std::vector<DeploymentPattern> stationary; // every distinct stationary pattern found
  std::vector<DeploymentPattern> candidates; // best stationary patterns within kWarmStartBand of f,
                                             // at most num_starts, best first
  std::vector<double> mu;
  double dual_value = 0.0; // f(mu)
  int iterations = 0;      // ellipsoid iterations (0 for a single evaluation)
  bool converged = true;

  int size() const { return static_cast<int>(patterns.size()); }
};

/// f(mu) = max_x sum_k mu_k r_k(x), estimated by multi-start SCA. The
/// returned set holds every distinct stationary pattern whose objective is
/// within cfg.concurrent_max_rel_tol of the best. Patterns are reported with
/// the last track at L. `warm_starts` are run in addition to the random
/// starts.
PatternSet dual_function(const Scenario& s, std::span<const double> mu, const SolverConfig& cfg,
                         std::span<const DeploymentPattern> warm_starts = {});

/// Deterministic multi-start points for cfg.rng_seed.
std::vector<DeploymentPattern> start_patterns(const ArrayGeometry& g, const SolverConfig& cfg);

/// Cut direction for the current state. Feasibility cuts (any mu_k <= 0, or
/// sum(mu) off 1 by more than cfg.ellipsoid_tol) ignore `candidates`;
/// otherwise the rates at the best candidate pattern (lexicographically
/// smallest among exact ties).
std::vector<double> subgradient(const DualState& state, const PatternSet& candidates,
                                double simplex_tol);

/// True when subgradient() would return an objective cut.
bool is_on_simplex(std::span<const double> mu, double simplex_tol);

/// Central-cut ellipsoid update. Throws NumericalError when g^T B g <= 0.
DualState ellipsoid_step(const DualState& state, std::span<const double> g);

struct DualTraceRow {
  int iteration = 0;
  std::vector<double> mu;
  double f = 0.0;        // NaN on feasibility cuts
  double cut_norm = 0.0; // sqrt(g^T B g)
  bool objective_cut = false;
};

/// Ellipsoid loop from mu = 1/K, B = K I until an objective cut has
/// sqrt(g^T B g) < cfg.ellipsoid_tol or cfg.ellipsoid_max_iters is reached.
/// The near-optimal stationary patterns of each evaluation are the warm
/// starts of the next. Returns the pattern set at the evaluated weights with the lowest f.
PatternSet run_algorithm1(const Scenario& s, const SolverConfig& cfg,
                          std::vector<DualTraceRow>* trace = nullptr);

void write_dual_trace_csv(std::ostream& out, const std::vector<DualTraceRow>& trace);

} // namespace matraj
