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

#include "matraj/dual.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <random>

#include "matraj/parallel.hpp"
#include "matraj/sca.hpp"

namespace matraj {

DualState DualState::initial(int num_users) {
  DualState st;
  const auto k = static_cast<size_t>(num_users);
  st.mu.assign(k, 1.0 / num_users);
  st.b.assign(k * k, 0.0);
  for (size_t i = 0; i < k; ++i) {
    st.b[i * k + i] = num_users;
  }
  return st;
}

std::vector<DeploymentPattern> start_patterns(const ArrayGeometry& g, const SolverConfig& cfg) {
  std::mt19937_64 rng(cfg.rng_seed);
  std::vector<DeploymentPattern> starts;
  starts.reserve(static_cast<size_t>(cfg.num_starts));
  for (int i = 0; i < cfg.num_starts; ++i) {
    starts.push_back(random_canonical_pattern(g, rng));
  }
  return starts;
}

PatternSet dual_function(const Scenario& s, std::span<const double> mu, const SolverConfig& cfg,
                         std::span<const DeploymentPattern> warm_starts) {
  auto starts = start_patterns(s.geometry, cfg);
  starts.insert(starts.end(), warm_starts.begin(), warm_starts.end());
  std::vector<ScaResult> runs(starts.size());
  parallel_for(starts.size(), [&](size_t i) { runs[i] = sca_iterate(s, mu, starts[i], cfg); });

  struct Candidate {
    DeploymentPattern x;
    double objective;
  };
  std::vector<Candidate> cands;
  cands.reserve(runs.size());
  for (const auto& r : runs) {
    cands.push_back({shift_to_right_edge(r.x, s.geometry), r.objective});
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return a.x < b.x; });

  // Merge near-duplicates, keeping the better representative of each cluster.
  std::vector<Candidate> merged;
  for (const auto& c : cands) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Candidate& m) {
      return chebyshev_distance(m.x, c.x) <= cfg.pattern_merge_tol;
    });
    if (it == merged.end()) {
      merged.push_back(c);
    } else if (c.objective > it->objective) {
      *it = c;
    }
  }

  double best = -std::numeric_limits<double>::infinity();
  for (const auto& c : merged) {
    best = std::max(best, c.objective);
  }
  PatternSet out;
  out.mu.assign(mu.begin(), mu.end());
  out.dual_value = best;
  out.iterations = 0;
  const double pool_floor = best - kWarmStartBand * std::abs(best);
  std::vector<const Candidate*> near;
  for (const auto& c : merged) {
    out.stationary.push_back(c.x);
    if (c.objective >= pool_floor) {
      near.push_back(&c);
    }
  }
  std::stable_sort(near.begin(), near.end(), [](const Candidate* a, const Candidate* b) {
    return a->objective > b->objective;
  });
  near.resize(std::min(near.size(), static_cast<size_t>(cfg.num_starts)));
  for (const Candidate* c : near) {
    out.candidates.push_back(c->x);
  }
  const double floor = best - cfg.concurrent_max_rel_tol * std::abs(best);
  for (const auto& c : merged) {
    if (c.objective >= floor) {
      out.patterns.push_back(c.x);
    }
  }
  std::sort(out.patterns.begin(), out.patterns.end());
  for (const auto& p : out.patterns) {
    out.rates.push_back(rate_vector(s, p));
    double obj = 0.0;
    for (size_t k = 0; k < mu.size(); ++k) {
      obj += mu[k] * out.rates.back().rates[k];
    }
    out.objectives.push_back(obj);
  }
  return out;
}

bool is_on_simplex(std::span<const double> mu, double simplex_tol) {
  double sum = 0.0;
  for (double v : mu) {
    if (v <= 0.0) {
      return false;
    }
    sum += v;
  }
  return std::abs(sum - 1.0) <= simplex_tol;
}

std::vector<double> subgradient(const DualState& state, const PatternSet& candidates,
                                double simplex_tol) {
  const auto k = state.mu.size();
  const auto argmin = static_cast<size_t>(
      std::min_element(state.mu.begin(), state.mu.end()) - state.mu.begin());
  if (state.mu[argmin] <= 0.0) {
    std::vector<double> g(k, 0.0);
    g[argmin] = -1.0;
    return g;
  }
  double sum = 0.0;
  for (double v : state.mu) {
    sum += v;
  }
  if (sum > 1.0 + simplex_tol) {
    return std::vector<double>(k, 1.0);
  }
  if (sum < 1.0 - simplex_tol) {
    return std::vector<double>(k, -1.0);
  }
  // Rates at the maximizer: the other members of the set are only within
  // concurrent_max_rel_tol of f and would give an inexact cut. Exact ties go to
  // the lexicographically smallest pattern (the set is sorted).
  size_t pick = 0;
  for (size_t i = 1; i < candidates.objectives.size(); ++i) {
    if (candidates.objectives[i] >
        candidates.objectives[pick] + 1e-12 * std::abs(candidates.objectives[pick])) {
      pick = i;
    }
  }
  return candidates.rates[pick].rates;
}

namespace {

std::vector<double> b_times(const DualState& st, std::span<const double> g) {
  const int k = st.size();
  std::vector<double> bg(static_cast<size_t>(k), 0.0);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      bg[static_cast<size_t>(i)] += st.b_at(i, j) * g[static_cast<size_t>(j)];
    }
  }
  return bg;
}

double quad_form(const DualState& st, std::span<const double> g) {
  const auto bg = b_times(st, g);
  double v = 0.0;
  for (size_t i = 0; i < bg.size(); ++i) {
    v += g[i] * bg[i];
  }
  return v;
}

} // namespace

DualState ellipsoid_step(const DualState& state, std::span<const double> g) {
  const int k = state.size();
  const auto bg = b_times(state, g);
  double gbg = 0.0;
  for (int i = 0; i < k; ++i) {
    gbg += g[static_cast<size_t>(i)] * bg[static_cast<size_t>(i)];
  }
  if (!(gbg > 0.0)) {
    throw NumericalError("ellipsoid collapsed: g^T B g <= 0");
  }
  const double kk = k;
  const double root = std::sqrt(gbg);
  DualState next = state;
  for (int i = 0; i < k; ++i) {
    next.mu[static_cast<size_t>(i)] -= bg[static_cast<size_t>(i)] / ((kk + 1.0) * root);
  }
  const double scale = kk * kk / (kk * kk - 1.0);
  const double shrink = 2.0 / (kk + 1.0) / gbg;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double v = scale * (state.b_at(i, j) - shrink * bg[static_cast<size_t>(i)] *
                                                       bg[static_cast<size_t>(j)]);
      next.b[static_cast<size_t>(i * k + j)] = v;
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double avg = 0.5 * (next.b_at(i, j) + next.b_at(j, i));
      next.b[static_cast<size_t>(i * k + j)] = avg;
      next.b[static_cast<size_t>(j * k + i)] = avg;
    }
  }
  ++next.iteration;
  return next;
}

PatternSet run_algorithm1(const Scenario& s, const SolverConfig& cfg,
                          std::vector<DualTraceRow>* trace) {
  const int k = s.num_users();
  if (k == 1) {
    const std::vector<double> mu{1.0};
    PatternSet ps = dual_function(s, mu, cfg);
    if (trace != nullptr) {
      trace->push_back({0, mu, ps.dual_value, 0.0, true});
    }
    return ps;
  }

  DualState state = DualState::initial(k);
  std::optional<PatternSet> best;
  std::vector<DeploymentPattern> pool;
  bool converged = false;
  for (int it = 0; it < cfg.ellipsoid_max_iters; ++it) {
    std::optional<PatternSet> eval;
    const bool objective_cut = is_on_simplex(state.mu, cfg.ellipsoid_tol);
    if (objective_cut) {
      eval = dual_function(s, state.mu, cfg, pool);
      pool = eval->candidates;
      if (!best || eval->dual_value < best->dual_value) {
        best = *eval;
      }
    }
    const auto g = objective_cut ? subgradient(state, *eval, cfg.ellipsoid_tol)
                                 : subgradient(state, PatternSet{}, cfg.ellipsoid_tol);
    const double cut_norm = std::sqrt(std::max(quad_form(state, g), 0.0));
    if (trace != nullptr) {
      trace->push_back({it, state.mu,
                        eval ? eval->dual_value : std::numeric_limits<double>::quiet_NaN(),
                        cut_norm, objective_cut});
    }
    if (objective_cut && cut_norm < cfg.ellipsoid_tol) {
      converged = true;
      best = std::move(eval);
      break;
    }
    state = ellipsoid_step(state, g);
  }

  if (!best) {
    // Never landed on the simplex: fall back to the normalized positive part.
    std::vector<double> mu(state.mu);
    double sum = 0.0;
    for (double& v : mu) {
      v = std::max(v, 1e-12);
      sum += v;
    }
    for (double& v : mu) {
      v /= sum;
    }
    best = dual_function(s, mu, cfg, pool);
  }
  best->iterations = state.iteration;
  best->converged = converged;
  return *best;
}

void write_dual_trace_csv(std::ostream& out, const std::vector<DualTraceRow>& trace) {
  out << "iteration,cut,f,cut_norm";
  const size_t k = trace.empty() ? 0 : trace.front().mu.size();
  for (size_t i = 0; i < k; ++i) {
    out << ",mu" << (i + 1);
  }
  out << '\n';
  const auto old_precision = out.precision(12);
  for (const auto& row : trace) {
    out << row.iteration << ',' << (row.objective_cut ? "objective" : "feasibility") << ',';
    if (!std::isnan(row.f)) {
      out << row.f;
    }
    out << ',' << row.cut_norm;
    for (double v : row.mu) {
      out << ',' << v;
    }
    out << '\n';
  }
  out.precision(old_precision);
}

} // namespace matraj
