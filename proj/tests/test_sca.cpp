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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "matraj/baseline.hpp"
#include "matraj/mmse.hpp"
#include "matraj/sca.hpp"
#include "test_support.hpp"

using namespace matraj;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const std::vector<double> kMu{0.229, 0.1507, 0.6203};

// Local maxima of a sampled curve (interior points and rising/falling ends).
std::vector<double> local_maxima(const GridResult& g) {
  std::vector<double> out;
  const size_t n = g.values.size();
  for (size_t i = 0; i < n; ++i) {
    const bool left = i == 0 || g.values[i] >= g.values[i - 1];
    const bool right = i + 1 == n || g.values[i] >= g.values[i + 1];
    if (left && right) {
      out.push_back(g.xs[i]);
    }
  }
  return out;
}

} // namespace

TEST_CASE("surrogate is tight at the anchor and below the gain elsewhere") {
  const Scenario s = test::two_track().scenario;
  std::mt19937_64 rng(21);
  for (int t = 0; t < 30; ++t) {
    const auto anchor = random_feasible_pattern(s.geometry, rng);
    for (int k = 0; k < s.num_users(); ++k) {
      const auto coeffs = build_surrogate(s, k, anchor);
      const double truth = normalized_gain(s, k, anchor);
      CHECK_THAT(coeffs.anchor_value, WithinRel(truth, 1e-10));
      CHECK_THAT(surrogate_value(s, k, anchor, coeffs), WithinRel(truth, 1e-8));
      const auto quad = surrogate_quadratic(coeffs);
      for (int probe = 0; probe < 30; ++probe) {
        const auto x = random_feasible_pattern(s.geometry, rng);
        const double lit = surrogate_value(s, k, x, coeffs);
        CHECK(lit <= normalized_gain(s, k, x) * (1.0 + 1e-8));
        CHECK_THAT(quad.value(x), WithinAbs(lit, 1e-9 * std::max(1.0, std::abs(lit))));
      }
    }
  }
}

TEST_CASE("surrogate slope equals the finite-difference gradient at the anchor") {
  const Scenario s = test::two_track().scenario;
  std::mt19937_64 rng(22);
  const double h = 1e-5;
  for (int t = 0; t < 20; ++t) {
    auto anchor = random_feasible_pattern(s.geometry, rng);
    // Keep the probes inside the box and away from the spacing constraint.
    anchor.x = {std::clamp(anchor.x[0], 0.1, 8.0), std::clamp(anchor.x[1], 9.0, 19.9)};
    for (int k = 0; k < s.num_users(); ++k) {
      const auto quad = surrogate_quadratic(build_surrogate(s, k, anchor));
      for (int m = 0; m < 2; ++m) {
        auto up = anchor;
        auto down = anchor;
        up.x[static_cast<size_t>(m)] += h;
        down.x[static_cast<size_t>(m)] -= h;
        const double fd = (normalized_gain(s, k, up) - normalized_gain(s, k, down)) / (2 * h);
        const double slope = quad.slope[static_cast<size_t>(m)];
        CHECK(std::abs(slope - fd) <= 1e-4 * std::max(std::abs(fd), 1e-2));
      }
    }
  }
}

TEST_CASE("projection lands on the nearest feasible pattern") {
  ArrayGeometry g;
  g.num_tracks = 4;
  g.span = 6.0;
  g.min_separation = 1.0;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 9.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> z(4);
    for (double& v : z) {
      v = u(rng);
    }
    const auto p = project_feasible(z, g);
    REQUIRE(is_feasible(p, g, 1e-9));
    double d2 = 0.0;
    for (size_t m = 0; m < 4; ++m) {
      d2 += (p.x[m] - z[m]) * (p.x[m] - z[m]);
    }
    for (int c = 0; c < 100; ++c) {
      const auto q = random_feasible_pattern(g, rng);
      double e2 = 0.0;
      for (size_t m = 0; m < 4; ++m) {
        e2 += (q.x[m] - z[m]) * (q.x[m] - z[m]);
      }
      CHECK(d2 <= e2 + 1e-12);
    }
  }
  const DeploymentPattern inside{{0.5, 2.0, 3.0, 5.5}};
  CHECK(project_feasible(inside.x, g) == inside);
}

TEST_CASE("random pattern draws are feasible; canonical draws end at L") {
  const ArrayGeometry g = test::two_track().scenario.geometry;
  std::mt19937_64 rng(24);
  for (int t = 0; t < 1000; ++t) {
    CHECK(is_feasible(random_feasible_pattern(g, rng), g));
    const auto c = random_canonical_pattern(g, rng);
    CHECK(is_feasible(c, g));
    CHECK(c.x.back() == g.span);
  }
}

TEST_CASE("a flat objective leaves the anchor unchanged") {
  const Scenario s = test::single_user(1, 3, 8.0);
  const std::vector<double> mu{1.0};
  const DeploymentPattern anchor{{3.25}};
  const auto res = solve_subproblem(s, mu, anchor);
  CHECK_THAT(res.x.x[0], WithinAbs(3.25, 1e-12));
}

TEST_CASE("SCA traces are monotone and reach distinct stationary points") {
  const Config c = test::two_track();
  std::mt19937_64 rng(25);
  std::vector<double> ends;
  for (int t = 0; t < 40; ++t) {
    const auto start = random_feasible_pattern(c.scenario.geometry, rng);
    const auto res = sca_iterate(c.scenario, kMu, start, c.solver);
    const auto& obj = res.trace.objectives;
    for (size_t i = 1; i < obj.size(); ++i) {
      CHECK(obj[i] >= obj[i - 1]);
    }
    for (const auto& x : res.trace.iterates) {
      CHECK(is_feasible(x, c.scenario.geometry));
    }
    CHECK_THAT(res.objective, WithinRel(weighted_objective(c.scenario, kMu, res.x), 1e-12));
    ends.push_back(shift_to_right_edge(res.x, c.scenario.geometry).x[0]);
  }
  std::sort(ends.begin(), ends.end());
  CHECK(ends.back() - ends.front() > 5.0);
}

TEST_CASE("SCA stationary points sit on grid local maxima") {
  const Config c = test::two_track();
  const GridResult grid = grid_oracle(c.scenario, GridObjective::Weighted,
                                      std::span<const double>(kMu), c.solver);
  const auto peaks = local_maxima(grid);
  std::mt19937_64 rng(26);
  double best_sca = -1.0;
  double best_x = 0.0;
  for (int t = 0; t < 30; ++t) {
    const auto start = random_canonical_pattern(c.scenario.geometry, rng);
    const auto res = sca_iterate(c.scenario, kMu, start, c.solver);
    const double x1 = shift_to_right_edge(res.x, c.scenario.geometry).x[0];
    double nearest = 1e9;
    for (double p : peaks) {
      nearest = std::min(nearest, std::abs(p - x1));
    }
    CHECK(nearest <= 0.05);
    if (res.objective > best_sca) {
      best_sca = res.objective;
      best_x = x1;
    }
  }
  CHECK(std::abs(best_x - grid.x1) <= 0.05);
  CHECK(best_sca >= grid.value - 1e-6);
}

TEST_CASE("starting at a stationary point stops at once") {
  const Config c = test::two_track();
  std::mt19937_64 rng(27);
  const auto first =
      sca_iterate(c.scenario, kMu, random_canonical_pattern(c.scenario.geometry, rng), c.solver);
  const auto again = sca_iterate(c.scenario, kMu, first.x, c.solver);
  CHECK(again.trace.iterates.size() <= 2);
  CHECK(chebyshev_distance(again.x, first.x) <= 1e-2);
  CHECK(again.objective >= first.objective);
}

TEST_CASE("soft-min utility stays within tau ln K of the minimum") {
  const auto u = softmin_utility(3, 0.01);
  const std::vector<double> r{2.0, 2.5, 3.0};
  const double v = u.value(r);
  CHECK(v <= 2.0);
  CHECK(v >= 2.0 - 0.01 * std::log(3.0));
  std::vector<double> g(3);
  u.gradient(r, g);
  CHECK_THAT(g[0] + g[1] + g[2], WithinRel(1.0, 1e-12));
  CHECK(g[0] > 0.99);
}
