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

#include <cmath>
#include <random>
#include <sstream>

#include "matraj/baseline.hpp"
#include "matraj/dual.hpp"
#include "matraj/timeshare.hpp"
#include "test_support.hpp"

using namespace matraj;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double determinant(std::vector<double> a, int n) {
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a[static_cast<size_t>(r * n + c)]) > std::abs(a[static_cast<size_t>(piv * n + c)])) {
        piv = r;
      }
    }
    if (piv != c) {
      for (int j = 0; j < n; ++j) {
        std::swap(a[static_cast<size_t>(c * n + j)], a[static_cast<size_t>(piv * n + j)]);
      }
      det = -det;
    }
    const double d = a[static_cast<size_t>(c * n + c)];
    det *= d;
    for (int r = c + 1; r < n; ++r) {
      const double f = a[static_cast<size_t>(r * n + c)] / d;
      for (int j = c; j < n; ++j) {
        a[static_cast<size_t>(r * n + j)] -= f * a[static_cast<size_t>(c * n + j)];
      }
    }
  }
  return det;
}

PatternSet two_candidates() {
  PatternSet ps;
  ps.patterns = {{{0.0, 1.0}}, {{0.5, 1.0}}};
  ps.rates = {RateVector{{1.0, 2.0, 3.0}, {}}, RateVector{{4.0, 5.0, 6.0}, {}}};
  ps.objectives = {2.0, 5.0};
  return ps;
}

} // namespace

TEST_CASE("feasibility cuts") {
  DualState st = DualState::initial(3);
  st.mu = {0.5, -0.1, 0.6};
  CHECK(subgradient(st, {}, 1e-4) == std::vector<double>{0.0, -1.0, 0.0});
  st.mu = {0.5, 0.5, 0.5};
  CHECK(subgradient(st, {}, 1e-4) == std::vector<double>{1.0, 1.0, 1.0});
  st.mu = {0.2, 0.2, 0.2};
  CHECK(subgradient(st, {}, 1e-4) == std::vector<double>{-1.0, -1.0, -1.0});
  CHECK_FALSE(is_on_simplex(std::vector<double>{0.5, 0.5, 0.5}, 1e-4));
  CHECK(is_on_simplex(std::vector<double>{0.2, 0.3, 0.50005}, 1e-4));
}

TEST_CASE("objective cut uses the rates of the maximizing pattern") {
  DualState st = DualState::initial(3);
  CHECK(subgradient(st, two_candidates(), 1e-4) == std::vector<double>{4.0, 5.0, 6.0});
}

TEST_CASE("one ellipsoid step from B = K I along e_1") {
  const DualState st = DualState::initial(3);
  const std::vector<double> g{1.0, 0.0, 0.0};
  const DualState next = ellipsoid_step(st, g);
  // mu - B g / ((K + 1) sqrt(g^T B g)) with B g = (3, 0, 0), g^T B g = 3
  CHECK_THAT(next.mu[0], WithinAbs(1.0 / 3.0 - std::sqrt(3.0) / 4.0, 1e-15));
  CHECK_THAT(next.mu[1], WithinAbs(1.0 / 3.0, 1e-15));
  // K^2/(K^2-1) (B - 2/(K+1) B g g^T B / g^T B g) = 9/8 diag(3/2, 3, 3)
  CHECK_THAT(next.b_at(0, 0), WithinRel(27.0 / 16.0, 1e-14));
  CHECK_THAT(next.b_at(1, 1), WithinRel(27.0 / 8.0, 1e-14));
  CHECK_THAT(next.b_at(2, 2), WithinRel(27.0 / 8.0, 1e-14));
  CHECK(next.b_at(0, 1) == 0.0);
  CHECK(next.iteration == 1);
}

TEST_CASE("ellipsoid volume shrinks at every step") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> d;
  for (int k : {2, 3, 5}) {
    DualState st = DualState::initial(k);
    double det = determinant(st.b, k);
    for (int it = 0; it < 60; ++it) {
      std::vector<double> g(static_cast<size_t>(k));
      for (double& v : g) {
        v = d(rng);
      }
      st = ellipsoid_step(st, g);
      const double next = determinant(st.b, k);
      CHECK(next < det);
      CHECK(next > 0.0);
      det = next;
    }
  }
  DualState st = DualState::initial(2);
  CHECK_THROWS_AS(ellipsoid_step(st, std::vector<double>{0.0, 0.0}), NumericalError);
}

TEST_CASE("a single user skips the ellipsoid loop") {
  Config c = test::two_track();
  c.scenario.users.erase(c.scenario.users.begin() + 1, c.scenario.users.end());
  std::vector<DualTraceRow> trace;
  const PatternSet ps = run_algorithm1(c.scenario, c.solver, &trace);
  CHECK(ps.mu == std::vector<double>{1.0});
  CHECK(ps.iterations == 0);
  CHECK(trace.size() == 1);
  // Interference-free: every pattern gives log2(1 + Pbar beta M N).
  CHECK_THAT(ps.dual_value, WithinRel(std::log2(61.0), 1e-9));
}

TEST_CASE("dual function reports sorted, concurrently maximizing patterns") {
  const Config c = test::two_track();
  const std::vector<double> mu{0.229, 0.1507, 0.6203};
  const PatternSet ps = dual_function(c.scenario, mu, c.solver);
  REQUIRE(ps.size() >= 1);
  CHECK(std::is_sorted(ps.patterns.begin(), ps.patterns.end()));
  for (int i = 0; i < ps.size(); ++i) {
    const auto& p = ps.patterns[static_cast<size_t>(i)];
    CHECK(p.x.back() == c.scenario.geometry.span);
    CHECK(ps.objectives[static_cast<size_t>(i)] >=
          ps.dual_value * (1.0 - c.solver.concurrent_max_rel_tol) - 1e-12);
  }
  const GridResult grid = grid_oracle(c.scenario, GridObjective::Weighted,
                                      std::span<const double>(mu), c.solver);
  CHECK(ps.dual_value >= grid.value - 1e-6);
  CHECK(ps.dual_value <= grid.value + 1e-3);
}

TEST_CASE("Algorithm output obeys weak duality and lands on the simplex") {
  const Config c = test::two_track();
  std::vector<DualTraceRow> trace;
  const PatternSet ps = run_algorithm1(c.scenario, c.solver, &trace);
  CHECK(ps.converged);
  CHECK(is_on_simplex(ps.mu, c.solver.ellipsoid_tol));
  RateMatrix r;
  r.num_patterns = ps.size();
  r.num_users = 3;
  for (const auto& rv : ps.rates) {
    r.values.insert(r.values.end(), rv.rates.begin(), rv.rates.end());
  }
  const auto alloc = allocate_time(r, 100.0, {}, 100.0);
  CHECK(alloc.min_rate <= ps.dual_value + 1e-3);

  std::ostringstream csv;
  write_dual_trace_csv(csv, trace);
  CHECK(csv.str().rfind("iteration,cut,f,cut_norm,mu1,mu2,mu3\n", 0) == 0);
  CHECK(trace.back().objective_cut);
  CHECK(trace.back().cut_norm < c.solver.ellipsoid_tol);
}
