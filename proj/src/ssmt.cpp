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

#include "matraj/ssmt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "matraj/mmse.hpp"
#include "matraj/parallel.hpp"

namespace matraj {

namespace {

constexpr double kGapTol = 1e-9;

// Relative tolerance for declaring two tour costs equal.
constexpr double kTieTol = 1e-12;

DeploymentPattern position_unchecked(const SwitchSegment& seg, double t) {
  DeploymentPattern p = seg.from;
  for (size_t m = 0; m < p.x.size(); ++m) {
    p.x[m] = t >= seg.arrival[m] ? seg.to.x[m] : seg.from.x[m] + seg.direction[m] * seg.speed * t;
  }
  return p;
}

using DistanceMatrix = std::vector<std::vector<double>>;

DistanceMatrix chebyshev_matrix(std::span<const DeploymentPattern> patterns) {
  const size_t n = patterns.size();
  DistanceMatrix d(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      d[i][j] = d[j][i] = chebyshev_distance(patterns[i], patterns[j]);
    }
  }
  return d;
}

double path_length(const DistanceMatrix& d, const std::vector<int>& order) {
  double total = 0.0;
  for (size_t i = 1; i < order.size(); ++i) {
    total += d[static_cast<size_t>(order[i - 1])][static_cast<size_t>(order[i])];
  }
  return total;
}

bool better(double cost, const std::vector<int>& order, double best_cost,
            const std::vector<int>& best_order) {
  const double tol = kTieTol * std::max(1.0, std::abs(best_cost));
  if (cost < best_cost - tol) {
    return true;
  }
  return cost <= best_cost + tol && order < best_order;
}

// suffix[mask][j]: shortest path that starts at j, whose visited set is mask
// (j in mask), and visits every remaining node.
std::vector<int> held_karp(const DistanceMatrix& d) {
  const int n = static_cast<int>(d.size());
  const size_t full = (size_t{1} << n) - 1;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> suffix((full + 1) * static_cast<size_t>(n), inf);
  auto at = [&](size_t mask, int j) -> double& {
    return suffix[mask * static_cast<size_t>(n) + static_cast<size_t>(j)];
  };
  for (int j = 0; j < n; ++j) {
    at(full, j) = 0.0;
  }
  for (size_t mask = full; mask-- > 1;) {
    for (int j = 0; j < n; ++j) {
      if (!(mask & (size_t{1} << j))) {
        continue;
      }
      double best = inf;
      for (int k = 0; k < n; ++k) {
        if (mask & (size_t{1} << k)) {
          continue;
        }
        best = std::min(best, d[static_cast<size_t>(j)][static_cast<size_t>(k)] +
                                  at(mask | (size_t{1} << k), k));
      }
      at(mask, j) = best;
    }
  }
  // Walk forward taking the smallest index that stays optimal.
  double opt = inf;
  for (int j = 0; j < n; ++j) {
    opt = std::min(opt, at(size_t{1} << j, j));
  }
  const double tol = kTieTol * std::max(1.0, opt);
  std::vector<int> order;
  int cur = 0;
  while (at(size_t{1} << cur, cur) > opt + tol) {
    ++cur;
  }
  size_t mask = size_t{1} << cur;
  order.push_back(cur);
  double remaining = at(mask, cur);
  while (mask != full) {
    for (int k = 0; k < n; ++k) {
      if (mask & (size_t{1} << k)) {
        continue;
      }
      const double via = d[static_cast<size_t>(cur)][static_cast<size_t>(k)] +
                         at(mask | (size_t{1} << k), k);
      if (via <= remaining + tol) {
        remaining = at(mask | (size_t{1} << k), k);
        mask |= size_t{1} << k;
        cur = k;
        order.push_back(k);
        break;
      }
    }
  }
  return order;
}

std::vector<int> nearest_neighbour_two_opt(const DistanceMatrix& d) {
  const int n = static_cast<int>(d.size());
  std::vector<int> best_order;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int start = 0; start < n; ++start) {
    std::vector<int> order{start};
    std::vector<bool> used(static_cast<size_t>(n), false);
    used[static_cast<size_t>(start)] = true;
    for (int step = 1; step < n; ++step) {
      const int cur = order.back();
      int next = -1;
      for (int k = 0; k < n; ++k) {
        if (!used[static_cast<size_t>(k)] &&
            (next < 0 || d[static_cast<size_t>(cur)][static_cast<size_t>(k)] <
                             d[static_cast<size_t>(cur)][static_cast<size_t>(next)])) {
          next = k;
        }
      }
      used[static_cast<size_t>(next)] = true;
      order.push_back(next);
    }
    // 2-opt on the open path: reverse order[i..j] when it shortens the path.
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < n - 1; ++i) {
        for (int j = i + 1; j < n; ++j) {
          std::vector<int> cand = order;
          std::reverse(cand.begin() + i, cand.begin() + j + 1);
          if (path_length(d, cand) < path_length(d, order) - 1e-12) {
            order = std::move(cand);
            improved = true;
          }
        }
      }
    }
    const double cost = path_length(d, order);
    if (best_order.empty() || better(cost, order, best_cost, best_order)) {
      best_cost = cost;
      best_order = order;
    }
  }
  return best_order;
}

} // namespace

double switching_time(const DeploymentPattern& a, const DeploymentPattern& b, double v_max) {
  const double dist = chebyshev_distance(a, b);
  if (dist == 0.0) {
    return 0.0;
  }
  if (!(v_max > 0.0)) {
    return kUnreachable;
  }
  return dist / v_max;
}

SwitchSegment make_segment(const DeploymentPattern& from, const DeploymentPattern& to,
                           const ArrayGeometry& g) {
  SwitchSegment seg;
  seg.from = from;
  seg.to = to;
  seg.speed = g.max_speed;
  seg.min_separation = g.min_separation;
  seg.duration = switching_time(from, to, g.max_speed);
  if (!std::isfinite(seg.duration)) {
    throw std::invalid_argument("make_segment: patterns unreachable at zero speed");
  }
  for (size_t m = 0; m < from.x.size(); ++m) {
    const double delta = to.x[m] - from.x[m];
    seg.direction.push_back(delta < 0.0 ? -1 : 1);
    seg.arrival.push_back(delta == 0.0 ? 0.0 : std::min(std::abs(delta) / seg.speed, seg.duration));
  }
  return seg;
}

DeploymentPattern transition_pattern(const SwitchSegment& seg, double t) {
  const double tt = std::clamp(t, 0.0, seg.duration);
  DeploymentPattern p = position_unchecked(seg, tt);
  if (min_gap(p) < seg.min_separation - kGapTol) {
    throw NumericalError("track spacing violated during a transition");
  }
  return p;
}

std::vector<double> segment_breakpoints(const SwitchSegment& seg) {
  std::vector<double> t{0.0, seg.duration};
  t.insert(t.end(), seg.arrival.begin(), seg.arrival.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

CouplingCheck verify_no_coupling(const SwitchSegment& seg, int samples) {
  if (samples < 2) {
    throw std::invalid_argument("verify_no_coupling: need at least two samples");
  }
  auto times = segment_breakpoints(seg);
  for (int i = 0; i < samples; ++i) {
    times.push_back(seg.duration * i / (samples - 1));
  }
  CouplingCheck out;
  out.min_distance = std::numeric_limits<double>::infinity();
  for (double t : times) {
    out.min_distance = std::min(out.min_distance, min_gap(position_unchecked(seg, t)));
  }
  out.ok = out.min_distance >= seg.min_separation - kGapTol;
  return out;
}

std::vector<double> switching_rates(const Scenario& s, const SwitchSegment& seg,
                                    const SolverConfig& cfg) {
  const auto num_users = static_cast<size_t>(s.num_users());
  std::vector<double> total(num_users, 0.0);
  if (seg.duration <= 0.0) {
    return total;
  }
  auto nodes = segment_breakpoints(seg);
  const int n = std::max(2, cfg.quadrature_samples_per_segment);
  for (int i = 0; i < n; ++i) {
    nodes.push_back(seg.duration * i / (n - 1));
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<std::vector<double>> values(nodes.size());
  parallel_for(nodes.size(), [&](size_t i) {
    values[i] = rate_vector(s, transition_pattern(seg, nodes[i])).rates;
  });
  for (size_t i = 1; i < nodes.size(); ++i) {
    const double h = nodes[i] - nodes[i - 1];
    for (size_t k = 0; k < num_users; ++k) {
      total[k] += 0.5 * h * (values[i - 1][k] + values[i][k]);
    }
  }
  return total;
}

double switching_rate(const Scenario& s, const SwitchSegment& seg, int k, const SolverConfig& cfg) {
  return switching_rates(s, seg, cfg).at(static_cast<size_t>(k));
}

Ordering order_patterns(std::span<const DeploymentPattern> patterns, double v_max) {
  Ordering out;
  const int n = static_cast<int>(patterns.size());
  if (n == 0) {
    return out;
  }
  const auto d = chebyshev_matrix(patterns);
  if (n == 1) {
    out.order = {0};
  } else if (n <= kHeldKarpLimit) {
    out.order = held_karp(d);
  } else {
    out.order = nearest_neighbour_two_opt(d);
    out.exact = false;
  }
  out.t_swi = 0.0;
  for (size_t i = 1; i < out.order.size(); ++i) {
    out.t_swi += switching_time(patterns[static_cast<size_t>(out.order[i - 1])],
                                patterns[static_cast<size_t>(out.order[i])], v_max);
  }
  return out;
}

Ordering order_patterns(const PatternSet& ps, double v_max) {
  return order_patterns(ps.patterns, v_max);
}

namespace {

SsmtPlan static_plan(const Scenario& s, const StaticSolution& fixed) {
  SsmtPlan plan;
  plan.mode = PlanMode::StaticFallback;
  plan.order = {0};
  plan.stays = {fixed.x};
  plan.stay_durations = {s.horizon};
  plan.switching_rates.assign(static_cast<size_t>(s.num_users()), 0.0);
  plan.t_swi = 0.0;
  plan.min_rate = fixed.min_rate;
  plan.user_rates = fixed.rates.rates;
  return plan;
}

} // namespace

SsmtPlan plan_ssmt(const Scenario& s, const PatternSet& ps, const StaticSolution& fixed,
                   const SolverConfig& cfg) {
  if (ps.patterns.empty()) {
    throw std::invalid_argument("plan_ssmt: empty pattern set");
  }
  const double horizon = s.horizon;
  const Ordering ord = order_patterns(ps, s.geometry.max_speed);
  if (!(ord.t_swi < horizon)) {
    return static_plan(s, fixed);
  }

  SsmtPlan plan;
  plan.mode = PlanMode::Dynamic;
  plan.order = ord.order;
  plan.t_swi = ord.t_swi;
  const auto num_users = static_cast<size_t>(s.num_users());
  plan.switching_rates.assign(num_users, 0.0);
  RateMatrix rates;
  rates.num_patterns = static_cast<int>(ord.order.size());
  rates.num_users = s.num_users();
  for (size_t i = 0; i < ord.order.size(); ++i) {
    const auto idx = static_cast<size_t>(ord.order[i]);
    plan.stays.push_back(ps.patterns[idx]);
    const auto& r = ps.rates[idx].rates;
    rates.values.insert(rates.values.end(), r.begin(), r.end());
    if (i == 0) {
      continue;
    }
    SwitchSegment seg = make_segment(plan.stays[i - 1], plan.stays[i], s.geometry);
    const auto check = verify_no_coupling(seg, cfg.quadrature_samples_per_segment);
    if (!check.ok) {
      throw NumericalError("transition between feasible patterns violates the track spacing");
    }
    const auto seg_rates = switching_rates(s, seg, cfg);
    for (size_t k = 0; k < num_users; ++k) {
      plan.switching_rates[k] += seg_rates[k];
    }
    plan.segments.push_back(std::move(seg));
  }

  const TimeAllocation alloc =
      allocate_time(rates, horizon - plan.t_swi, plan.switching_rates, horizon);
  if (alloc.min_rate < fixed.min_rate) {
    return static_plan(s, fixed);
  }
  plan.stay_durations = alloc.durations;
  plan.min_rate = alloc.min_rate;
  plan.user_rates = alloc.user_rates;
  return plan;
}

const char* to_string(PlanMode mode) {
  return mode == PlanMode::Dynamic ? "dynamic" : "static-fallback";
}

nlohmann::json plan_to_json(const SsmtPlan& plan) {
  nlohmann::json out;
  out["mode"] = to_string(plan.mode);
  out["t_swi"] = plan.t_swi;
  out["min_rate"] = plan.min_rate;
  out["user_rates"] = plan.user_rates;
  out["switching_rates"] = plan.switching_rates;
  out["stays"] = nlohmann::json::array();
  for (size_t i = 0; i < plan.stays.size(); ++i) {
    out["stays"].push_back({{"pattern", plan.stays[i].x}, {"seconds", plan.stay_durations[i]}});
  }
  out["segments"] = nlohmann::json::array();
  for (const auto& seg : plan.segments) {
    std::vector<double> velocity;
    for (size_t m = 0; m < seg.direction.size(); ++m) {
      velocity.push_back(seg.arrival[m] > 0.0 ? seg.direction[m] * seg.speed : 0.0);
    }
    out["segments"].push_back({{"from", seg.from.x},
                               {"to", seg.to.x},
                               {"duration", seg.duration},
                               {"velocity", velocity},
                               {"arrival", seg.arrival}});
  }
  return out;
}

} // namespace matraj
