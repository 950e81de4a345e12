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

#include "matraj/properties.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "matraj/baseline.hpp"
#include "matraj/channel.hpp"
#include "matraj/dual.hpp"
#include "matraj/kernels.hpp"
#include "matraj/mmse.hpp"
#include "matraj/pipeline.hpp"
#include "matraj/sca.hpp"
#include "matraj/ssmt.hpp"

namespace matraj {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Scenario random_scenario(Rng& rng, int max_tracks, int max_per_track, int max_users) {
  Scenario s;
  auto& g = s.geometry;
  g.num_tracks = uniform_int(rng, 1, max_tracks);
  g.antennas_per_track = uniform_int(rng, 1, max_per_track);
  g.min_separation = 0.5;
  g.span = (g.num_tracks - 1) * g.min_separation + uniform(rng, 1.0, 10.0);
  g.max_speed = uniform(rng, 0.0, 1.0);
  const int k = uniform_int(rng, 1, max_users);
  for (int i = 0; i < k; ++i) {
    s.users.emplace_back(uniform(rng, 0.0, std::numbers::pi), uniform(rng, 0.0, std::numbers::pi),
                         uniform(rng, 0.0, 15.0), std::pow(10.0, uniform(rng, -1.0, 1.0)));
  }
  s.noise_dbm = 0.0;
  s.horizon = 100.0;
  return s;
}

class Timer {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

PropertyResult finish(std::string name, bool passed, const std::ostringstream& detail,
                      const Timer& t) {
  return {std::move(name), passed, detail.str(), t.seconds()};
}

} // namespace

PropertyResult check_channel_norm(const Config&, const PropertyOptions& o) {
  const Timer timer;
  Rng rng(o.seed);
  double worst = 0.0;
  for (int i = 0; i < o.channel_instances; ++i) {
    const Scenario s = random_scenario(rng, 4, 4, 3);
    const auto p = random_feasible_pattern(s.geometry, rng);
    for (int k = 0; k < s.num_users(); ++k) {
      const double expect = s.users[static_cast<size_t>(k)].gain() * s.geometry.num_elements();
      const double got = squared_norm(channel_vector(s, k, p));
      worst = std::max(worst, std::abs(got - expect) / expect);
    }
  }
  std::ostringstream d;
  d << "max relative error " << worst << " over " << o.channel_instances << " instances";
  return finish("channel norm equals beta*M*N", worst <= 1e-12, d, timer);
}

PropertyResult check_mmse_dominance(const Config& c, const PropertyOptions& o) {
  const Timer timer;
  Rng rng(o.seed + 1);
  std::normal_distribution<double> gauss;
  int violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  const Scenario& s = c.scenario;
  const auto powers = s.normalized_powers();
  for (int i = 0; i < o.beamformer_instances; ++i) {
    const auto p = random_feasible_pattern(s.geometry, rng);
    const auto channels = channel_vectors(s, p);
    for (int k = 0; k < s.num_users(); ++k) {
      const double best = powers[static_cast<size_t>(k)] * normalized_gain(channels, powers, k);
      for (int b = 0; b < o.beamformers_per_instance; ++b) {
        CVector w(static_cast<size_t>(s.geometry.num_elements()));
        for (auto& v : w) {
          v = {gauss(rng), gauss(rng)};
        }
        const double scale = 1.0 / std::sqrt(squared_norm(w));
        for (auto& v : w) {
          v *= scale;
        }
        const double other = beamformer_sinr(channels, powers, k, w);
        min_margin = std::min(min_margin, (best - other) / best);
        if (other > best * (1.0 + 1e-12)) {
          ++violations;
        }
      }
    }
  }
  std::ostringstream d;
  d << violations << " violations, min relative margin " << min_margin;
  return finish("MMSE SINR dominates random beamformers", violations == 0, d, timer);
}

PropertyResult check_surrogate_bounds(const Config& c, const PropertyOptions& o) {
  const Timer timer;
  Rng rng(o.seed + 2);
  const Scenario& s = c.scenario;
  double worst_tight = 0.0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < o.surrogate_pairs; ++i) {
    const auto anchor = random_feasible_pattern(s.geometry, rng);
    const auto x = random_feasible_pattern(s.geometry, rng);
    const auto coeffs = build_surrogates(s, anchor);
    for (int k = 0; k < s.num_users(); ++k) {
      const auto& ck = coeffs[static_cast<size_t>(k)];
      const double at_anchor = normalized_gain(s, k, anchor);
      worst_tight = std::max(worst_tight, std::abs(surrogate_value(s, k, anchor, ck) - at_anchor) /
                                              (1.0 + std::abs(at_anchor)));
      const double truth = normalized_gain(s, k, x);
      worst_excess = std::max(worst_excess, (surrogate_value(s, k, x, ck) - truth) /
                                                std::max(std::abs(truth), 1e-300));
    }
  }
  std::ostringstream d;
  d << "max anchor gap " << worst_tight << ", max relative excess over truth " << worst_excess;
  return finish("surrogate tight at anchor and below the true gain",
                worst_tight <= 1e-8 && worst_excess <= 1e-8, d, timer);
}

PropertyResult check_sca_monotone(const Config& c, const PropertyOptions& o) {
  const Timer timer;
  Rng rng(o.seed + 3);
  const Scenario& s = c.scenario;
  int violations = 0;
  long steps = 0;
  for (int i = 0; i < o.sca_starts; ++i) {
    std::vector<double> mu(static_cast<size_t>(s.num_users()));
    double sum = 0.0;
    for (double& v : mu) {
      v = uniform(rng, 0.05, 1.0);
      sum += v;
    }
    for (double& v : mu) {
      v /= sum;
    }
    const auto x0 = random_feasible_pattern(s.geometry, rng);
    const auto res = sca_iterate(s, mu, x0, c.solver);
    const auto& obj = res.trace.objectives;
    for (size_t q = 1; q < obj.size(); ++q) {
      ++steps;
      if (obj[q] < obj[q - 1] - 1e-10) {
        ++violations;
      }
    }
    for (const auto& it : res.trace.iterates) {
      if (!is_feasible(it, s.geometry)) {
        ++violations;
      }
    }
  }
  std::ostringstream d;
  d << violations << " violations over " << steps << " SCA steps";
  return finish("SCA objective monotone and iterates feasible", violations == 0, d, timer);
}

double simplex_grid_max_min(const RateMatrix& rates, double budget,
                            const std::vector<double>& offsets, double horizon, int steps) {
  const int g = rates.num_patterns;
  const auto value = [&](const std::vector<double>& t) {
    return evaluate_allocation(rates, t, offsets, horizon).min_rate;
  };
  if (g == 1) {
    return value({budget});
  }
  // Coarse scan over the first g-1 shares, last share takes the rest.
  std::vector<double> best_t(static_cast<size_t>(g), 0.0);
  double best = -std::numeric_limits<double>::infinity();
  const double h = budget / steps;
  std::vector<double> t(static_cast<size_t>(g));
  std::function<void(int, double)> scan = [&](int i, double left) {
    if (i == g - 1) {
      t[static_cast<size_t>(i)] = left;
      const double v = value(t);
      if (v > best) {
        best = v;
        best_t = t;
      }
      return;
    }
    for (int j = 0; j * h <= left + 1e-12; ++j) {
      t[static_cast<size_t>(i)] = j * h;
      scan(i + 1, left - j * h);
    }
  };
  scan(0, budget);
  // Zoom: rescan a shrinking box around the incumbent.
  double radius = h;
  for (int round = 0; round < 40; ++round) {
    const int local = 10;
    const auto centre = best_t;
    std::function<void(int, double)> zoom = [&](int i, double left) {
      if (i == g - 1) {
        if (left < -1e-12) {
          return;
        }
        t[static_cast<size_t>(i)] = std::max(0.0, left);
        const double v = value(t);
        if (v > best) {
          best = v;
          best_t = t;
        }
        return;
      }
      for (int j = -local; j <= local; ++j) {
        const double ti = centre[static_cast<size_t>(i)] + radius * j / local;
        if (ti < 0.0 || ti > left + 1e-12) {
          continue;
        }
        t[static_cast<size_t>(i)] = ti;
        zoom(i + 1, left - ti);
      }
    };
    zoom(0, budget);
    radius *= 0.5;
  }
  return best;
}

PropertyResult check_lp_vs_grid(const Config&, const PropertyOptions& o) {
  const Timer timer;
  Rng rng(o.seed + 4);
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < o.lp_instances; ++i) {
    RateMatrix r;
    r.num_patterns = 1 + i % 3;
    r.num_users = uniform_int(rng, 1, 4);
    for (int v = 0; v < r.num_patterns * r.num_users; ++v) {
      r.values.push_back(uniform(rng, 0.0, 6.0));
    }
    const double horizon = uniform(rng, 10.0, 200.0);
    const double budget = horizon * uniform(rng, 0.3, 1.0);
    std::vector<double> offsets;
    if (i % 2 == 1) {
      for (int k = 0; k < r.num_users; ++k) {
        offsets.push_back(uniform(rng, 0.0, 50.0));
      }
    }
    const auto lp = allocate_time(r, budget, offsets, horizon);
    const double grid = simplex_grid_max_min(r, budget, offsets, horizon);
    const double diff = std::abs(lp.min_rate - grid);
    worst = std::max(worst, diff);
    if (diff > 1e-3 || lp.min_rate < grid - 1e-8) {
      ++failures;
    }
  }
  std::ostringstream d;
  d << failures << " mismatches, max |LP - grid| " << worst;
  return finish("time-sharing LP matches the simplex grid", failures == 0, d, timer);
}

double brute_force_path_length(const std::vector<std::vector<double>>& dist) {
  std::vector<int> perm(dist.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double len = 0.0;
    for (size_t i = 1; i < perm.size(); ++i) {
      len += dist[static_cast<size_t>(perm[i - 1])][static_cast<size_t>(perm[i])];
    }
    best = std::min(best, len);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return perm.empty() ? 0.0 : best;
}

PropertyResult check_ordering_exact(const Config& c, const PropertyOptions& o) {
  const Timer timer;
  Rng rng(o.seed + 5);
  const auto& g = c.scenario.geometry;
  int failures = 0;
  double worst = 0.0;
  for (int n = 1; n <= 8; ++n) {
    for (int i = 0; i < o.ordering_instances; ++i) {
      std::vector<DeploymentPattern> ps;
      for (int j = 0; j < n; ++j) {
        ps.push_back(random_feasible_pattern(g, rng));
      }
      std::vector<std::vector<double>> dist(static_cast<size_t>(n),
                                            std::vector<double>(static_cast<size_t>(n)));
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          dist[static_cast<size_t>(a)][static_cast<size_t>(b)] =
              chebyshev_distance(ps[static_cast<size_t>(a)], ps[static_cast<size_t>(b)]);
        }
      }
      const auto ord = order_patterns(ps, 1.0);
      const double brute = brute_force_path_length(dist);
      const double diff = std::abs(ord.t_swi - brute);
      worst = std::max(worst, diff);
      if (diff > 1e-12 * std::max(1.0, brute)) {
        ++failures;
      }
    }
  }
  std::ostringstream d;
  d << failures << " mismatches, max difference " << worst;
  return finish("Held-Karp path equals exhaustive search", failures == 0, d, timer);
}

PropertyResult check_no_coupling(const Config& c, const PropertyOptions& o) {
  const Timer timer;
  Rng rng(o.seed + 6);
  ArrayGeometry g = c.scenario.geometry;
  int failures = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < o.coupling_segments; ++i) {
    g.max_speed = uniform(rng, 0.05, 5.0);
    const auto a = random_feasible_pattern(g, rng);
    const auto b = random_feasible_pattern(g, rng);
    const auto seg = make_segment(a, b, g);
    const auto check = verify_no_coupling(seg, o.coupling_samples);
    if (g.num_tracks > 1) {
      worst_slack = std::min(worst_slack, check.min_distance - g.min_separation);
    }
    // The sampled minimum must never undercut the breakpoint minimum.
    double at_breaks = std::numeric_limits<double>::infinity();
    for (double t : segment_breakpoints(seg)) {
      at_breaks = std::min(at_breaks, min_gap(transition_pattern(seg, t)));
    }
    if (!check.ok || check.min_distance < at_breaks - 1e-9) {
      ++failures;
    }
  }
  std::ostringstream d;
  d << failures << " failing segments, min gap slack " << worst_slack;
  return finish("no track coupling during transitions", failures == 0, d, timer);
}

PropertyResult check_mode_sandwich(const Config& c, const PropertyOptions& o) {
  const Timer timer;
  Rng rng(o.seed + 7);
  int failures = 0;
  double worst_upper = -std::numeric_limits<double>::infinity();
  double worst_lower = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < o.sandwich_scenarios; ++i) {
    Config cfg;
    cfg.solver = c.solver;
    cfg.scenario = random_scenario(rng, 2, 2, 3);
    cfg.scenario.geometry.num_tracks = 2;
    cfg.scenario.geometry.span = std::max(cfg.scenario.geometry.span, 1.5);
    cfg.scenario.geometry.max_speed = uniform(rng, 0.0, 0.5);
    SolverCache cache;
    const double ideal = solve(cfg, Mode::Ideal, &cache).min_rate;
    const double ssmt = solve(cfg, Mode::Ssmt, &cache).min_rate;
    const double fixed = solve(cfg, Mode::Static, &cache).min_rate;
    worst_lower = std::max(worst_lower, fixed - ssmt);
    worst_upper = std::max(worst_upper, ssmt - ideal);
    if (fixed > ssmt + 1e-9 || ssmt > ideal + 1e-6) {
      ++failures;
    }
  }
  std::ostringstream d;
  d << failures << " violations, max(static - ssmt) " << worst_lower << ", max(ssmt - ideal) "
    << worst_upper;
  return finish("static <= ssmt <= ideal", failures == 0, d, timer);
}

std::vector<PropertyResult> run_property_suite(const Config& c, const PropertyOptions& o) {
  return {check_channel_norm(c, o),   check_mmse_dominance(c, o), check_surrogate_bounds(c, o),
          check_sca_monotone(c, o),   check_lp_vs_grid(c, o),     check_ordering_exact(c, o),
          check_no_coupling(c, o),    check_mode_sandwich(c, o)};
}

} // namespace matraj
