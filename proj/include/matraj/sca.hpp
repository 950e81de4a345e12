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

// Successive convex approximation of the weighted sum rate over one
// deployment pattern.
//
// At an anchor pattern x_q the interference-normalized gain
//   gamma~_k(x) = h_k^H(x) A_k^-1(x) h_k(x)
// is bounded from below by a function that is tight (value and gradient) at
// x_q. The bound chains three minorizers:
//   * the variational form max_z 2Re(h^H z) - z^H A z evaluated at
//     z = g_k = A_k^-1(x_q) h_k(x_q);
//   * a majorizer of each interference term h_j^H g g^H h_j obtained by
//     replacing g g^H with ||g||^2 I around h_j(x_q);
//   * a second-order lower bound cos(u) >= cos(u0) - sin(u0)(u-u0) - (u-u0)^2/2
//     applied to every element of the resulting real parts.
// The result is a separable concave quadratic in the track coordinates, so
// each subproblem is a smooth concave program over the spacing polytope.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "matraj/channel.hpp"
#include "matraj/linalg.hpp"
#include "matraj/scenario.hpp"

namespace matraj {

struct SurrogateCoefficients {
  int user = 0;
  DeploymentPattern anchor;
  CVector g;                  // A_k^-1(x_q) h_k(x_q)
  double lambda_max = 0.0;    // largest eigenvalue of g g^H, i.e. ||g||^2
  std::vector<CVector> o;     // (lambda_max I - g g^H) h_j(x_q); empty for j == k
  std::vector<double> c;      // C_j; unused (0) for j == k
  double d = 0.0;             // D_k = sum_{j != k} Pbar_j C_j + ||g||^2
  double anchor_value = 0.0;  // gamma~_k(x_q)

  // Per source j (j == k uses g, j != k uses o_j) and element i = m*N + n:
  // |v_i| and the phase zeta_{j,i}(x_q) + arg(v_i) at the anchor.
  std::vector<std::vector<double>> magnitude;
  std::vector<std::vector<double>> anchor_phase;
  std::vector<double> weight;    // 2 sqrt(beta_k) for j == k, 2 Pbar_j sqrt(beta_j) otherwise
  std::vector<double> frequency; // 2 pi cos(theta_j) cos(phi_j); curvature is its square
};

/// gamma~'(x) = constant + sum_m slope_m d_m - curvature_m d_m^2 / 2,  d = x - x_q
struct SeparableQuadratic {
  DeploymentPattern anchor;
  double constant = 0.0;
  std::vector<double> slope;
  std::vector<double> curvature;

  double value(const DeploymentPattern& x) const;
  void add_gradient(const DeploymentPattern& x, double scale, std::span<double> grad) const;
};

struct ScaTrace {
  std::vector<DeploymentPattern> iterates;
  std::vector<double> objectives;
  bool converged = false;
};

struct SubproblemResult {
  DeploymentPattern x;
  double objective = 0.0; // surrogate objective at x
  int iterations = 0;
  bool converged = false;
};

struct ScaResult {
  DeploymentPattern x;
  double objective = 0.0; // true weighted objective at x
  ScaTrace trace;
};

SurrogateCoefficients build_surrogate(const Scenario& s, int k, const DeploymentPattern& anchor);
std::vector<SurrogateCoefficients> build_surrogates(const Scenario& s,
                                                    const DeploymentPattern& anchor);

/// Lower bound gamma~'_k(x, x_q), assembled term by term from the
/// coefficients (the Taylor-bounded cosine sums minus D_k).
double surrogate_value(const Scenario& s, int k, const DeploymentPattern& x,
                       const SurrogateCoefficients& coeffs);

/// The same bound collapsed to its separable quadratic form.
SeparableQuadratic surrogate_quadratic(const SurrogateCoefficients& coeffs);

/// sum_k mu_k log2(1 + gamma_k(x))
double weighted_objective(const Scenario& s, std::span<const double> mu,
                          const DeploymentPattern& x);

/// Euclidean projection onto {x : x_{m} - x_{m-1} >= d_min, 0 <= x_m <= L}.
DeploymentPattern project_feasible(std::span<const double> z, const ArrayGeometry& g);

/// Uniform draw from the feasible polytope (sorted uniforms after removing
/// the mandatory spacing).
DeploymentPattern random_feasible_pattern(const ArrayGeometry& g, std::mt19937_64& rng);

/// Uniform draw from the slice x_M = L of the feasible polytope. Rates only
/// see track differences, so this samples every equivalence class once.
DeploymentPattern random_canonical_pattern(const ArrayGeometry& g, std::mt19937_64& rng);

/// Concave objective for projected gradient ascent. Returns std::nullopt when
/// x is outside the objective's domain; otherwise the value, with the
/// gradient written to `grad`.
using ConcaveObjective =
    std::function<std::optional<double>(const DeploymentPattern& x, std::span<double> grad)>;

struct AscentOptions {
  int max_iters = 300;
  double step_tol = 1e-11;
};

/// Projected gradient ascent with backtracking, starting from a feasible
/// point inside the objective's domain. Never returns a point with a lower
/// objective than the start.
SubproblemResult projected_gradient_ascent(const ArrayGeometry& g, const DeploymentPattern& start,
                                           const ConcaveObjective& f, AscentOptions opts = {});

/// Concave, nondecreasing function U of the per-user rate vector. Users with
/// used[k] == false do not enter U and are not evaluated.
struct RateUtility {
  std::vector<bool> used;
  std::function<double(std::span<const double> rates)> value;
  /// dU/dr_k written to `grad` (entries of unused users are ignored).
  std::function<void(std::span<const double> rates, std::span<double> grad)> gradient;
};

/// U(r) = sum_k mu_k r_k
RateUtility weighted_utility(std::span<const double> mu);

/// U(r) = -tau ln sum_k exp(-r_k / tau), a smooth lower approximation of
/// min_k r_k within tau ln K.
RateUtility softmin_utility(int num_users, double tau);

/// Maximizes U(log2(1 + Pbar_k gamma~'_k(x, x_q))) over the feasible polytope.
SubproblemResult solve_subproblem(const Scenario& s, const RateUtility& u,
                                  const DeploymentPattern& anchor);

/// Maximizes sum_k mu_k log2(1 + Pbar_k gamma~'_k(x, x_q)) over the feasible
/// polytope.
SubproblemResult solve_subproblem(const Scenario& s, std::span<const double> mu,
                                  const DeploymentPattern& anchor);

/// Re-anchored SCA on U of the true rates until the relative improvement
/// drops below cfg.sca_rel_tol or cfg.sca_max_iters is reached.
ScaResult sca_maximize(const Scenario& s, const RateUtility& u, const DeploymentPattern& x_init,
                       const SolverConfig& cfg);

/// sca_maximize with the weighted sum rate.
ScaResult sca_iterate(const Scenario& s, std::span<const double> mu,
                      const DeploymentPattern& x_init, const SolverConfig& cfg);

} // namespace matraj
