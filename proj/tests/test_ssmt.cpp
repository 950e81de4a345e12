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
#include <numeric>
#include <random>

#include "matraj/baseline.hpp"
#include "matraj/dual.hpp"
#include "matraj/mmse.hpp"
#include "matraj/properties.hpp"
#include "matraj/sca.hpp"
#include "matraj/ssmt.hpp"
#include "test_support.hpp"

using namespace matraj;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const DeploymentPattern kA{{0.0, 20.0}};
const DeploymentPattern kB{{6.63, 20.0}};
const DeploymentPattern kC{{15.56, 20.0}};

struct Solved {
  Config config;
  PatternSet patterns;
  StaticSolution fixed;
};

const Solved& solved() {
  static const Solved s = [] {
    Solved out;
    out.config = test::two_track();
    out.patterns = run_algorithm1(out.config.scenario, out.config.solver);
    out.fixed = static_optimal(out.config.scenario, out.config.solver);
    return out;
  }();
  return s;
}

} // namespace

TEST_CASE("switching time is the Chebyshev distance over the speed") {
  CHECK(switching_time(kB, kB, 2.0) == 0.0);
  CHECK(switching_time(kB, kB, 0.0) == 0.0);
  CHECK_THAT(switching_time(kA, kB, 2.0), WithinRel(3.315, 1e-12));
  CHECK(switching_time(kA, kB, 2.0) == switching_time(kB, kA, 2.0));
  CHECK(switching_time(kA, kB, 0.0) == kUnreachable);
  for (double v : {0.1, 1.0, 3.0}) {
    CHECK_THAT(switching_time(kA, kB, v) + switching_time(kB, kC, v), WithinRel(15.56 / v, 1e-12));
  }
}

TEST_CASE("collinear patterns are visited monotonically") {
  const std::vector<DeploymentPattern> ps{kB, kA, kC};
  const Ordering o = order_patterns(ps, 0.5);
  CHECK(o.exact);
  const bool forward = o.order == std::vector<int>{1, 0, 2};
  const bool backward = o.order == std::vector<int>{2, 0, 1};
  CHECK((forward || backward));
  CHECK(forward); // lexicographic tie-break between the two directions
  CHECK_THAT(o.t_swi, WithinRel(15.56 / 0.5, 1e-12));

  const Ordering one = order_patterns(std::vector<DeploymentPattern>{kB}, 1.0);
  CHECK(one.order == std::vector<int>{0});
  CHECK(one.t_swi == 0.0);
}

TEST_CASE("Held-Karp path equals exhaustive search") {
  ArrayGeometry g = test::two_track().scenario.geometry;
  g.num_tracks = 3;
  std::mt19937_64 rng(51);
  for (int n : {2, 5, 7}) {
    for (int t = 0; t < 5; ++t) {
      std::vector<DeploymentPattern> ps;
      for (int i = 0; i < n; ++i) {
        ps.push_back(random_feasible_pattern(g, rng));
      }
      std::vector<std::vector<double>> dist(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n)));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          dist[static_cast<size_t>(i)][static_cast<size_t>(j)] =
              switching_time(ps[static_cast<size_t>(i)], ps[static_cast<size_t>(j)], 1.0);
        }
      }
      const Ordering o = order_patterns(ps, 1.0);
      CHECK_THAT(o.t_swi, WithinAbs(brute_force_path_length(dist), 1e-12));
      auto sorted = o.order;
      std::sort(sorted.begin(), sorted.end());
      std::vector<int> all(static_cast<size_t>(n));
      std::iota(all.begin(), all.end(), 0);
      CHECK(sorted == all);
    }
  }
}

TEST_CASE("large pattern sets fall back to the heuristic") {
  ArrayGeometry g = test::two_track().scenario.geometry;
  std::mt19937_64 rng(52);
  std::vector<DeploymentPattern> ps;
  for (int i = 0; i < kHeldKarpLimit + 3; ++i) {
    ps.push_back(random_feasible_pattern(g, rng));
  }
  const Ordering o = order_patterns(ps, 1.0);
  CHECK_FALSE(o.exact);
  CHECK(o.order.size() == ps.size());
  double len = 0.0;
  for (size_t i = 1; i < o.order.size(); ++i) {
    len += switching_time(ps[static_cast<size_t>(o.order[i - 1])],
                          ps[static_cast<size_t>(o.order[i])], 1.0);
  }
  CHECK_THAT(o.t_swi, WithinRel(len, 1e-12));
}

TEST_CASE("tracks move at full speed and stop on arrival") {
  ArrayGeometry g = test::two_track().scenario.geometry;
  g.max_speed = 1.0;
  const SwitchSegment seg = make_segment(kA, kB, g);
  CHECK_THAT(seg.duration, WithinRel(6.63, 1e-12));
  CHECK(transition_pattern(seg, 0.0) == kA);
  CHECK(transition_pattern(seg, seg.duration).x == kB.x);
  CHECK_THAT(transition_pattern(seg, seg.arrival[0] / 2.0).x[0], WithinAbs(3.315, 1e-12));

  const SwitchSegment cross = make_segment({{0.0, 5.0}}, {{8.0, 9.0}}, g);
  CHECK_THAT(cross.arrival[1], WithinRel(4.0, 1e-12));
  const auto mid = transition_pattern(cross, 6.0);
  CHECK_THAT(mid.x[0], WithinAbs(6.0, 1e-12));
  CHECK_THAT(mid.x[1], WithinAbs(9.0, 1e-12));
  CHECK(segment_breakpoints(cross) == std::vector<double>{0.0, 4.0, 8.0});
}

TEST_CASE("no coupling between feasible endpoints") {
  ArrayGeometry g = test::two_track().scenario.geometry;
  g.num_tracks = 4;
  g.max_speed = 0.7;
  std::mt19937_64 rng(53);
  for (int t = 0; t < 200; ++t) {
    const auto seg = make_segment(random_feasible_pattern(g, rng), random_feasible_pattern(g, rng), g);
    const auto check = verify_no_coupling(seg, 500);
    CHECK(check.ok);
    CHECK(check.min_distance >= g.min_separation - 1e-12);
  }
  ArrayGeometry one = g;
  one.num_tracks = 1;
  const auto single = verify_no_coupling(make_segment({{1.0}}, {{7.0}}, one), 100);
  CHECK(single.ok);
  CHECK(std::isinf(single.min_distance));
}

TEST_CASE("an infeasible endpoint is reported as coupling") {
  ArrayGeometry g = test::two_track().scenario.geometry;
  g.max_speed = 1.0;
  // Target gap 0.2 is below d_min.
  const SwitchSegment seg = make_segment({{0.0, 5.0}}, {{4.0, 4.2}}, g);
  const auto check = verify_no_coupling(seg, 100);
  CHECK_FALSE(check.ok);
  CHECK(check.min_distance < g.min_separation);
  CHECK_THROWS_AS(transition_pattern(seg, seg.duration), NumericalError);
}

TEST_CASE("switching rate integrates the instantaneous rate") {
  Config c = test::two_track();
  c.scenario.geometry.max_speed = 1.0;
  const Scenario& s = c.scenario;
  const SwitchSegment still = make_segment(kB, kB, s.geometry);
  CHECK(switching_rate(s, still, 0, c.solver) == 0.0);

  // A rigid shift keeps every rate constant.
  const SwitchSegment shift = make_segment({{2.0, 10.0}}, {{5.0, 13.0}}, s.geometry);
  const auto r = rate_vector(s, shift.from);
  for (int k = 0; k < 3; ++k) {
    CHECK_THAT(switching_rate(s, shift, k, c.solver),
               WithinRel(3.0 * r.rates[static_cast<size_t>(k)], 1e-9));
  }

  SolverConfig fine = c.solver;
  fine.quadrature_samples_per_segment *= 2;
  for (const auto& seg : {make_segment(kA, kB, s.geometry), make_segment(kB, kC, s.geometry)}) {
    const auto coarse = switching_rates(s, seg, c.solver);
    const auto refined = switching_rates(s, seg, fine);
    for (size_t k = 0; k < 3; ++k) {
      CHECK(std::abs(coarse[k] - refined[k]) <= 1e-4 * refined[k]);
    }
  }
}

TEST_CASE("zero speed falls back to the static pattern") {
  const Solved& sv = solved();
  Config c = sv.config;
  c.scenario.geometry.max_speed = 0.0;
  const SsmtPlan plan = plan_ssmt(c.scenario, sv.patterns, sv.fixed, c.solver);
  CHECK(plan.mode == PlanMode::StaticFallback);
  CHECK(plan.stays.size() == 1);
  CHECK_THAT(plan.min_rate, WithinRel(sv.fixed.min_rate, 1e-12));
}

TEST_CASE("dynamic plans spend exactly the horizon") {
  const Solved& sv = solved();
  for (double v : {0.5, 2.0, 10.0}) {
    Config c = sv.config;
    c.scenario.geometry.max_speed = v;
    const SsmtPlan plan = plan_ssmt(c.scenario, sv.patterns, sv.fixed, c.solver);
    REQUIRE(plan.mode == PlanMode::Dynamic);
    const double stays = std::accumulate(plan.stay_durations.begin(), plan.stay_durations.end(), 0.0);
    CHECK_THAT(stays + plan.t_swi, WithinRel(c.scenario.horizon, 1e-12));
    CHECK(plan.segments.size() == plan.stays.size() - 1);
    CHECK(plan.min_rate >= sv.fixed.min_rate);
    for (const auto& seg : plan.segments) {
      CHECK(verify_no_coupling(seg, 1000).ok);
    }
    const auto doc = plan_to_json(plan);
    CHECK(doc["stays"].size() == plan.stays.size());
    CHECK(doc["segments"].size() == plan.segments.size());
  }
}
