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

#include <compare>
#include <numbers>
#include <vector>

#include "matraj/linalg.hpp"
#include "matraj/scenario.hpp"

namespace matraj {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Horizontal coordinates of the M tracks, in wavelengths.
struct DeploymentPattern {
  std::vector<double> x;

  int size() const { return static_cast<int>(x.size()); }
  auto operator<=>(const DeploymentPattern&) const = default;
};

/// Ordering and spacing constraints: x ascending, consecutive gaps >= d_min,
/// every coordinate inside [0, L]. `tol` absorbs rounding.
bool is_feasible(const DeploymentPattern& p, const ArrayGeometry& g, double tol = 1e-9);

/// Smallest gap between neighbouring tracks (infinity for M = 1).
double min_gap(const DeploymentPattern& p);

/// max_m |a_m - b_m|
double chebyshev_distance(const DeploymentPattern& a, const DeploymentPattern& b);

/// Shifts every track by the same amount so that the last track sits at L.
/// Rates depend only on track differences, so this is a canonical
/// representative of the equivalence class.
DeploymentPattern shift_to_right_edge(const DeploymentPattern& p, const ArrayGeometry& g);

/// Channel of user k (0-based). Element (m, n) is stored at m*N + n and equals
/// sqrt(beta_k) * exp(-j 2 pi (x_m cos(theta)cos(phi) + y_n sin(theta))).
CVector channel_vector(const Scenario& s, int k, const DeploymentPattern& p);

/// Channels of every user for one pattern.
std::vector<CVector> channel_vectors(const Scenario& s, const DeploymentPattern& p);

} // namespace matraj
