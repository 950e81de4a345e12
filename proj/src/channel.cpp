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

#include "matraj/channel.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace matraj {

bool is_feasible(const DeploymentPattern& p, const ArrayGeometry& g, double tol) {
  if (p.size() != g.num_tracks) {
    return false;
  }
  for (int m = 0; m < p.size(); ++m) {
    const double xm = p.x[static_cast<size_t>(m)];
    if (!std::isfinite(xm) || xm < -tol || xm > g.span + tol) {
      return false;
    }
    if (m > 0 && xm - p.x[static_cast<size_t>(m - 1)] < g.min_separation - tol) {
      return false;
    }
  }
  return true;
}

double min_gap(const DeploymentPattern& p) {
  double gap = std::numeric_limits<double>::infinity();
  for (size_t m = 1; m < p.x.size(); ++m) {
    gap = std::min(gap, p.x[m] - p.x[m - 1]);
  }
  return gap;
}

double chebyshev_distance(const DeploymentPattern& a, const DeploymentPattern& b) {
  assert(a.x.size() == b.x.size());
  double d = 0.0;
  for (size_t m = 0; m < a.x.size(); ++m) {
    d = std::max(d, std::abs(a.x[m] - b.x[m]));
  }
  return d;
}

DeploymentPattern shift_to_right_edge(const DeploymentPattern& p, const ArrayGeometry& g) {
  DeploymentPattern out = p;
  if (out.x.empty()) {
    return out;
  }
  const double shift = g.span - out.x.back();
  for (double& xm : out.x) {
    xm += shift;
  }
  out.x.back() = g.span;
  return out;
}

CVector channel_vector(const Scenario& s, int k, const DeploymentPattern& p) {
  const auto& g = s.geometry;
  const auto& u = s.users.at(static_cast<size_t>(k));
  assert(p.size() == g.num_tracks);
  const int n_per_track = g.antennas_per_track;
  const double amp = std::sqrt(u.gain());
  CVector h(static_cast<size_t>(g.num_elements()));
  for (int m = 0; m < g.num_tracks; ++m) {
    const double hor = p.x[static_cast<size_t>(m)] * u.horizontal_aoa();
    for (int n = 0; n < n_per_track; ++n) {
      const double phase = kTwoPi * (hor + 0.5 * n * u.vertical_aoa());
      h[static_cast<size_t>(m * n_per_track + n)] = std::polar(amp, -phase);
    }
  }
  return h;
}

std::vector<CVector> channel_vectors(const Scenario& s, const DeploymentPattern& p) {
  std::vector<CVector> hs;
  hs.reserve(s.users.size());
  for (int k = 0; k < s.num_users(); ++k) {
    hs.push_back(channel_vector(s, k, p));
  }
  return hs;
}

} // namespace matraj
