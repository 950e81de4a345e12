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

#include "matraj/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "matraj/mmse.hpp"
#include "matraj/parallel.hpp"

namespace matraj {

const std::vector<double> kSweepElevations = {1.41, 1.14, 1.81, 0.18, 3.12, 2.91, 0.73, 1.09, 2.98};
const std::vector<double> kSweepAzimuths = {0.72, 0.69, 1.65, 2.23, 2.28, 0.41, 1.62, 0.59, 0.38};

const char* to_string(Mode mode) {
  switch (mode) {
  case Mode::Ideal:
    return "ideal";
  case Mode::Ssmt:
    return "ssmt";
  case Mode::Static:
    return "static";
  }
  return "?";
}

Mode parse_mode(const std::string& name) {
  if (name == "ideal") {
    return Mode::Ideal;
  }
  if (name == "ssmt") {
    return Mode::Ssmt;
  }
  if (name == "static") {
    return Mode::Static;
  }
  throw std::invalid_argument("unknown mode '" + name + "' (expected ideal, ssmt or static)");
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

RateMatrix rate_matrix(const std::vector<RateVector>& rates) {
  RateMatrix m;
  m.num_patterns = static_cast<int>(rates.size());
  m.num_users = rates.empty() ? 0 : static_cast<int>(rates.front().rates.size());
  for (const auto& r : rates) {
    m.values.insert(m.values.end(), r.rates.begin(), r.rates.end());
  }
  return m;
}

const StaticSolution& ensure_static(const Config& config, SolverCache& cache) {
  if (!cache.fixed) {
    cache.fixed = static_optimal(config.scenario, config.solver);
  }
  return *cache.fixed;
}

// The dual loop only estimates f(mu) by multi-start SCA. When its pattern set
// time-shares worse than the best single pattern, that pattern was missed and
// is added to the set.
void add_static_if_better(const Scenario& s, const StaticSolution& fixed, PatternSet& ps) {
  const auto alloc = allocate_time(rate_matrix(ps.rates), s.horizon, {}, s.horizon);
  if (alloc.min_rate >= fixed.min_rate) {
    return;
  }
  const DeploymentPattern x = shift_to_right_edge(fixed.x, s.geometry);
  const auto at = std::lower_bound(ps.patterns.begin(), ps.patterns.end(), x);
  const auto i = at - ps.patterns.begin();
  const RateVector r = rate_vector(s, x);
  double obj = 0.0;
  for (size_t k = 0; k < ps.mu.size(); ++k) {
    obj += ps.mu[k] * r.rates[k];
  }
  ps.patterns.insert(at, x);
  ps.rates.insert(ps.rates.begin() + i, r);
  ps.objectives.insert(ps.objectives.begin() + i, obj);
}

const PatternSet& ensure_patterns(const Config& config, SolverCache& cache,
                                  std::vector<DualTraceRow>* trace) {
  if (!cache.patterns) {
    PatternSet ps = run_algorithm1(config.scenario, config.solver, trace);
    add_static_if_better(config.scenario, ensure_static(config, cache), ps);
    cache.patterns = std::move(ps);
  }
  return *cache.patterns;
}

} // namespace

SolveResult solve(const Config& config, Mode mode, SolverCache* cache,
                  std::vector<DualTraceRow>* trace) {
  const auto start = Clock::now();
  SolverCache local;
  SolverCache& c = cache != nullptr ? *cache : local;
  const Scenario& s = config.scenario;

  SolveResult out;
  out.mode = mode;
  switch (mode) {
  case Mode::Ideal: {
    const PatternSet& ps = ensure_patterns(config, c, trace);
    out.patterns = ps;
    out.allocation = allocate_time(rate_matrix(ps.rates), s.horizon, {}, s.horizon);
    out.min_rate = out.allocation->min_rate;
    out.user_rates = out.allocation->user_rates;
    out.gamma = ps.size();
    out.converged = ps.converged;
    break;
  }
  case Mode::Ssmt: {
    const PatternSet& ps = ensure_patterns(config, c, trace);
    const StaticSolution& fixed = ensure_static(config, c);
    out.patterns = ps;
    out.fixed = fixed;
    out.plan = plan_ssmt(s, ps, fixed, config.solver);
    out.min_rate = out.plan->min_rate;
    out.user_rates = out.plan->user_rates;
    out.gamma = static_cast<int>(out.plan->stays.size());
    out.t_swi = out.plan->t_swi;
    out.converged = ps.converged;
    break;
  }
  case Mode::Static: {
    const StaticSolution& fixed = ensure_static(config, c);
    out.fixed = fixed;
    out.min_rate = fixed.min_rate;
    out.user_rates = fixed.rates.rates;
    out.gamma = 1;
    break;
  }
  }
  out.wall_ms = elapsed_ms(start);
  return out;
}

SolveResult evaluate_on(const Scenario& truth, const SolveResult& planned,
                        const SolverConfig& cfg) {
  SolveResult out = planned;
  const double horizon = truth.horizon;
  const auto static_rates = [&](const DeploymentPattern& x) {
    const auto r = rate_vector(truth, x);
    out.user_rates = r.rates;
    out.min_rate = r.min_rate();
  };
  switch (planned.mode) {
  case Mode::Ideal: {
    std::vector<RateVector> rates;
    for (const auto& p : planned.patterns->patterns) {
      rates.push_back(rate_vector(truth, p));
    }
    const auto alloc =
        evaluate_allocation(rate_matrix(rates), planned.allocation->durations, {}, horizon);
    out.min_rate = alloc.min_rate;
    out.user_rates = alloc.user_rates;
    break;
  }
  case Mode::Ssmt: {
    const SsmtPlan& plan = *planned.plan;
    if (plan.mode == PlanMode::StaticFallback) {
      static_rates(plan.stays.front());
      break;
    }
    std::vector<RateVector> rates;
    for (const auto& p : plan.stays) {
      rates.push_back(rate_vector(truth, p));
    }
    std::vector<double> offsets(static_cast<size_t>(truth.num_users()), 0.0);
    for (const auto& seg : plan.segments) {
      const auto r = switching_rates(truth, seg, cfg);
      for (size_t k = 0; k < offsets.size(); ++k) {
        offsets[k] += r[k];
      }
    }
    const auto alloc =
        evaluate_allocation(rate_matrix(rates), plan.stay_durations, offsets, horizon);
    out.min_rate = alloc.min_rate;
    out.user_rates = alloc.user_rates;
    break;
  }
  case Mode::Static:
    static_rates(planned.fixed->x);
    break;
  }
  return out;
}

nlohmann::json result_to_json(const SolveResult& r, const Config& config) {
  nlohmann::json out;
  out["mode"] = to_string(r.mode);
  out["min_rate"] = r.min_rate;
  out["user_rates"] = r.user_rates;
  out["gamma"] = r.gamma;
  out["t_swi"] = r.t_swi;
  out["wall_ms"] = r.wall_ms;
  out["converged"] = r.converged;
  out["seed"] = config.solver.rng_seed;
  out["config_hash"] = config_hash(config);
  out["config"] = to_json(config);
  if (r.patterns) {
    nlohmann::json ps;
    ps["mu"] = r.patterns->mu;
    ps["dual_value"] = r.patterns->dual_value;
    ps["iterations"] = r.patterns->iterations;
    ps["converged"] = r.patterns->converged;
    ps["patterns"] = nlohmann::json::array();
    for (int i = 0; i < r.patterns->size(); ++i) {
      ps["patterns"].push_back({{"x", r.patterns->patterns[static_cast<size_t>(i)].x},
                                {"rates", r.patterns->rates[static_cast<size_t>(i)].rates}});
    }
    out["pattern_set"] = ps;
  }
  if (r.allocation) {
    out["allocation"] = {{"durations", r.allocation->durations},
                         {"min_rate", r.allocation->min_rate}};
  }
  if (r.plan) {
    out["plan"] = plan_to_json(*r.plan);
  }
  if (r.fixed) {
    out["static"] = {{"x", r.fixed->x.x},
                     {"rates", r.fixed->rates.rates},
                     {"min_rate", r.fixed->min_rate}};
  }
  return out;
}

const char* to_string(SweepAxis axis) {
  switch (axis) {
  case SweepAxis::L:
    return "L";
  case SweepAxis::VMax:
    return "V_max";
  case SweepAxis::N:
    return "N";
  case SweepAxis::K:
    return "K";
  case SweepAxis::AoaError:
    return "aoa_error";
  case SweepAxis::X1Curve:
    return "x1_curve";
  }
  return "?";
}

SweepAxis parse_axis(const std::string& name) {
  for (SweepAxis a : {SweepAxis::L, SweepAxis::VMax, SweepAxis::N, SweepAxis::K,
                      SweepAxis::AoaError, SweepAxis::X1Curve}) {
    if (name == to_string(a)) {
      return a;
    }
  }
  throw std::invalid_argument("unknown sweep axis '" + name +
                              "' (expected L, V_max, N, K, aoa_error or x1_curve)");
}

std::vector<double> parse_range(const std::string& text) {
  const auto number = [&](const std::string& tok) {
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size() || !std::isfinite(v)) {
      throw std::invalid_argument("invalid range value '" + tok + "'");
    }
    return v;
  };
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ':');) {
      parts.push_back(tok);
    }
    if (parts.size() != 3) {
      throw std::invalid_argument("range must be start:stop:step");
    }
    const double a = number(parts[0]);
    const double b = number(parts[1]);
    const double step = number(parts[2]);
    if (!(step > 0.0) || b < a) {
      throw std::invalid_argument("range needs start <= stop and a positive step");
    }
    const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    if (n > 1000000) {
      throw std::invalid_argument("range has too many points");
    }
    for (long i = 0; i <= n; ++i) {
      out.push_back(a + static_cast<double>(i) * step);
    }
    return out;
  }
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    out.push_back(number(tok));
  }
  if (out.empty()) {
    throw std::invalid_argument("empty range");
  }
  return out;
}

Config apply_axis(const Config& base, SweepAxis axis, double value) {
  Config c = base;
  auto& g = c.scenario.geometry;
  const auto integral = [&](const char* what) {
    if (value < 1.0 || value != std::floor(value)) {
      throw std::invalid_argument(std::string(what) + " sweep values must be positive integers");
    }
    return static_cast<int>(value);
  };
  switch (axis) {
  case SweepAxis::L:
    g.span = value;
    break;
  case SweepAxis::VMax:
    if (value < 0.0) {
      throw std::invalid_argument("V_max sweep values must be nonnegative");
    }
    g.max_speed = value;
    break;
  case SweepAxis::N:
    g.antennas_per_track = integral("N");
    break;
  case SweepAxis::K: {
    const int k = integral("K");
    if (k > static_cast<int>(kSweepElevations.size())) {
      throw std::invalid_argument("K sweep supports at most 9 users");
    }
    const UserSpec proto = base.scenario.users.front();
    c.scenario.users.clear();
    for (int i = 0; i < k; ++i) {
      c.scenario.users.emplace_back(kSweepElevations[static_cast<size_t>(i)],
                                    kSweepAzimuths[static_cast<size_t>(i)], proto.tx_power_dbm(),
                                    proto.gain());
    }
    break;
  }
  case SweepAxis::AoaError:
  case SweepAxis::X1Curve:
    break; // the scenario itself is unchanged
  }
  c.scenario.validate();
  c.solver.validate(g);
  return c;
}

std::vector<SweepRow> run_sweep(const Config& base, SweepAxis axis,
                                const std::vector<double>& values, const std::vector<Mode>& modes) {
  std::vector<std::vector<SweepRow>> per_value(values.size());

  if (axis == SweepAxis::X1Curve) {
    const auto& g = base.scenario.geometry;
    if (g.num_tracks != 2) {
      throw std::invalid_argument("x1_curve sweep requires exactly two tracks");
    }
    parallel_for(values.size(), [&](size_t i) {
      const auto start = Clock::now();
      const double x1 = values[i];
      const DeploymentPattern p{{x1, g.span}};
      if (!is_feasible(p, g)) {
        throw std::invalid_argument("x1_curve value outside [0, L - d_min]");
      }
      const auto r = rate_vector(base.scenario, p);
      per_value[i].push_back({x1, "curve", r.min_rate(), r.rates, 1, 0.0, elapsed_ms(start)});
    });
  } else {
    // Speed does not enter the pattern set or the static baseline, so a
    // V_max sweep shares one cache.
    SolverCache shared;
    if (axis == SweepAxis::VMax) {
      const Config c0 = apply_axis(base, axis, values.front());
      for (Mode m : modes) {
        if (m != Mode::Static) {
          ensure_patterns(c0, shared, nullptr);
        }
        if (m != Mode::Ideal) {
          ensure_static(c0, shared);
        }
      }
    }
    parallel_for(values.size(), [&](size_t i) {
      const Config c = apply_axis(base, axis, values[i]);
      SolverCache own = axis == SweepAxis::VMax ? shared : SolverCache{};
      for (Mode m : modes) {
        SolveResult r;
        if (axis == SweepAxis::AoaError) {
          Config estimated = c;
          estimated.scenario = apply_aoa_error(c.scenario, values[i]);
          r = evaluate_on(c.scenario, solve(estimated, m, &own), c.solver);
        } else {
          r = solve(c, m, &own);
        }
        per_value[i].push_back(
            {values[i], to_string(m), r.min_rate, r.user_rates, r.gamma, r.t_swi, r.wall_ms});
      }
    });
  }

  std::vector<SweepRow> rows;
  for (auto& v : per_value) {
    for (auto& row : v) {
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, bool timing) {
  const auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
  };
  out << "axis_value,mode,min_rate,per_user_rates,gamma,t_swi,wall_ms\n";
  for (const auto& r : rows) {
    out << fmt(r.axis_value) << ',' << r.mode << ',' << fmt(r.min_rate) << ',';
    for (size_t k = 0; k < r.user_rates.size(); ++k) {
      out << (k > 0 ? ";" : "") << fmt(r.user_rates[k]);
    }
    out << ',' << r.gamma << ',' << fmt(r.t_swi) << ',' << (timing ? fmt(r.wall_ms) : "0") << '\n';
  }
}

} // namespace matraj
