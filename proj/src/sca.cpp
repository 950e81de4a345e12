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

#include "matraj/sca.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

#include "matraj/kernels.hpp"
#include "matraj/mmse.hpp"

namespace matraj {

namespace {

// 1 + Pbar * gamma~' must stay above this for the log to be evaluated.
constexpr double kLogDomainFloor = 1e-9;

// Largest multiple of the surrogate step tried by the extrapolation.
constexpr double kMaxExtrapolation = 0x1p40;

void fill_phases(const CVector& v, const CVector& h, double weight, double frequency,
                 SurrogateCoefficients& c) {
  // h_i = sqrt(beta) exp(-j zeta_i), so Re(h^H v) = sqrt(beta) sum_i |v_i| cos(zeta_i + arg v_i).
  std::vector<double> mag(v.size());
  std::vector<double> phase(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    mag[i] = std::abs(v[i]);
    phase[i] = std::arg(v[i]) - std::arg(h[i]);
  }
  c.magnitude.push_back(std::move(mag));
  c.anchor_phase.push_back(std::move(phase));
  c.weight.push_back(weight);
  c.frequency.push_back(frequency);
}

SurrogateCoefficients build_from_channels(const Scenario& s, int k,
                                          const DeploymentPattern& anchor,
                                          std::span<const CVector> channels,
                                          std::span<const double> powers) {
  const auto& geo = s.geometry;
  const double mn = geo.num_elements();
  const int num_users = s.num_users();

  SurrogateCoefficients c;
  c.user = k;
  c.anchor = anchor;
  const CVector& hk = channels[static_cast<size_t>(k)];
  const Cholesky chol(interference_matrix(channels, powers, k));
  c.g = chol.solve(hk);
  c.lambda_max = squared_norm(c.g);
  c.anchor_value = kernels::dotc(hk, c.g).real();
  c.o.resize(static_cast<size_t>(num_users));
  c.c.assign(static_cast<size_t>(num_users), 0.0);
  c.d = c.lambda_max;

  for (int j = 0; j < num_users; ++j) {
    const auto& user = s.users[static_cast<size_t>(j)];
    const double freq = kTwoPi * user.horizontal_aoa();
    const double amp = std::sqrt(user.gain());
    const CVector& hj = channels[static_cast<size_t>(j)];
    if (j == k) {
      fill_phases(c.g, hj, 2.0 * amp, freq, c);
      continue;
    }
    // o_j = lambda h_j - g (g^H h_j)
    CVector o(hj.size());
    for (size_t i = 0; i < hj.size(); ++i) {
      o[i] = c.lambda_max * hj[i];
    }
    kernels::axpy(-kernels::dotc(c.g, hj), c.g, o);
    const double cj = c.lambda_max * user.gain() * mn + kernels::dotc(hj, o).real();
    c.c[static_cast<size_t>(j)] = cj;
    c.d += powers[static_cast<size_t>(j)] * cj;
    fill_phases(o, hj, 2.0 * powers[static_cast<size_t>(j)] * amp, freq, c);
    c.o[static_cast<size_t>(j)] = std::move(o);
  }
  return c;
}

} // namespace

double SeparableQuadratic::value(const DeploymentPattern& x) const {
  double v = constant;
  for (size_t m = 0; m < slope.size(); ++m) {
    const double d = x.x[m] - anchor.x[m];
    v += slope[m] * d - 0.5 * curvature[m] * d * d;
  }
  return v;
}

void SeparableQuadratic::add_gradient(const DeploymentPattern& x, double scale,
                                      std::span<double> grad) const {
  for (size_t m = 0; m < slope.size(); ++m) {
    grad[m] += scale * (slope[m] - curvature[m] * (x.x[m] - anchor.x[m]));
  }
}

SurrogateCoefficients build_surrogate(const Scenario& s, int k, const DeploymentPattern& anchor) {
  const auto channels = channel_vectors(s, anchor);
  const auto powers = s.normalized_powers();
  return build_from_channels(s, k, anchor, channels, powers);
}

std::vector<SurrogateCoefficients> build_surrogates(const Scenario& s,
                                                    const DeploymentPattern& anchor) {
  const auto channels = channel_vectors(s, anchor);
  const auto powers = s.normalized_powers();
  std::vector<SurrogateCoefficients> out;
  out.reserve(channels.size());
  for (int k = 0; k < s.num_users(); ++k) {
    out.push_back(build_from_channels(s, k, anchor, channels, powers));
  }
  return out;
}

double surrogate_value(const Scenario& s, int k, const DeploymentPattern& x,
                       const SurrogateCoefficients& coeffs) {
  assert(coeffs.user == k);
  (void)k;
  const int n_per_track = s.geometry.antennas_per_track;
  double total = -coeffs.d;
  for (size_t j = 0; j < coeffs.weight.size(); ++j) {
    const double a = coeffs.frequency[j];
    double sum = 0.0;
    for (size_t i = 0; i < coeffs.magnitude[j].size(); ++i) {
      const size_t m = i / static_cast<size_t>(n_per_track);
      const double du = a * (x.x[m] - coeffs.anchor.x[m]);
      const double phi = coeffs.anchor_phase[j][i];
      sum += coeffs.magnitude[j][i] * (std::cos(phi) - std::sin(phi) * du - 0.5 * du * du);
    }
    total += coeffs.weight[j] * sum;
  }
  return total;
}

SeparableQuadratic surrogate_quadratic(const SurrogateCoefficients& coeffs) {
  const size_t num_tracks = coeffs.anchor.x.size();
  const size_t n_per_track = coeffs.g.size() / num_tracks;
  SeparableQuadratic q;
  q.anchor = coeffs.anchor;
  q.constant = -coeffs.d;
  q.slope.assign(num_tracks, 0.0);
  q.curvature.assign(num_tracks, 0.0);
  for (size_t j = 0; j < coeffs.weight.size(); ++j) {
    const double w = coeffs.weight[j];
    const double a = coeffs.frequency[j];
    for (size_t i = 0; i < coeffs.magnitude[j].size(); ++i) {
      const size_t m = i / n_per_track;
      const double mag = coeffs.magnitude[j][i];
      const double phi = coeffs.anchor_phase[j][i];
      q.constant += w * mag * std::cos(phi);
      q.slope[m] -= w * mag * a * std::sin(phi);
      q.curvature[m] += w * mag * a * a;
    }
  }
  return q;
}

double weighted_objective(const Scenario& s, std::span<const double> mu,
                          const DeploymentPattern& x) {
  const auto rates = rate_vector(s, x);
  double total = 0.0;
  for (size_t k = 0; k < rates.rates.size(); ++k) {
    total += mu[k] * rates.rates[k];
  }
  return total;
}

DeploymentPattern project_feasible(std::span<const double> z, const ArrayGeometry& g) {
  // With u_m = x_m - m d_min the constraints become u nondecreasing inside
  // [0, L - (M-1) d_min]. Isotonic regression (pool adjacent violators)
  // followed by clipping gives the Euclidean projection.
  const size_t m_count = z.size();
  const double d = g.min_separation;
  struct Block {
    double sum;
    double count;
  };
  std::vector<Block> blocks;
  blocks.reserve(m_count);
  for (size_t m = 0; m < m_count; ++m) {
    blocks.push_back({z[m] - static_cast<double>(m) * d, 1.0});
    while (blocks.size() > 1) {
      const Block& last = blocks.back();
      const Block& prev = blocks[blocks.size() - 2];
      if (prev.sum / prev.count <= last.sum / last.count) {
        break;
      }
      const Block merged{prev.sum + last.sum, prev.count + last.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  const double upper = g.span - static_cast<double>(m_count - 1) * d;
  DeploymentPattern out;
  out.x.reserve(m_count);
  for (const Block& b : blocks) {
    const double u = std::clamp(b.sum / b.count, 0.0, upper);
    for (int c = 0; c < static_cast<int>(b.count); ++c) {
      out.x.push_back(u + static_cast<double>(out.x.size()) * d);
    }
  }
  return out;
}

DeploymentPattern random_feasible_pattern(const ArrayGeometry& g, std::mt19937_64& rng) {
  const double upper = g.span - static_cast<double>(g.num_tracks - 1) * g.min_separation;
  std::uniform_real_distribution<double> dist(0.0, upper);
  std::vector<double> u(static_cast<size_t>(g.num_tracks));
  for (double& v : u) {
    v = dist(rng);
  }
  std::sort(u.begin(), u.end());
  DeploymentPattern p;
  for (size_t m = 0; m < u.size(); ++m) {
    p.x.push_back(u[m] + static_cast<double>(m) * g.min_separation);
  }
  return p;
}

DeploymentPattern random_canonical_pattern(const ArrayGeometry& g, std::mt19937_64& rng) {
  const double upper = g.span - static_cast<double>(g.num_tracks - 1) * g.min_separation;
  std::uniform_real_distribution<double> dist(0.0, upper);
  std::vector<double> u(static_cast<size_t>(g.num_tracks));
  for (size_t m = 0; m + 1 < u.size(); ++m) {
    u[m] = dist(rng);
  }
  u.back() = upper;
  std::sort(u.begin(), u.end());
  DeploymentPattern p;
  for (size_t m = 0; m < u.size(); ++m) {
    p.x.push_back(u[m] + static_cast<double>(m) * g.min_separation);
  }
  return p;
}

SubproblemResult projected_gradient_ascent(const ArrayGeometry& g, const DeploymentPattern& start,
                                           const ConcaveObjective& f, AscentOptions opts) {
  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-14;
  constexpr double kMaxStep = 1e8;

  const size_t m_count = start.x.size();
  SubproblemResult res;
  res.x = start;
  std::vector<double> grad(m_count, 0.0);
  std::vector<double> trial_grad(m_count, 0.0);
  const auto start_value = f(res.x, grad);
  if (!start_value) {
    throw NumericalError("projected gradient ascent started outside the objective domain");
  }
  res.objective = *start_value;

  double step = 1.0;
  std::vector<double> z(m_count);
  for (res.iterations = 0; res.iterations < opts.max_iters; ++res.iterations) {
    bool accepted = false;
    DeploymentPattern y;
    double y_value = 0.0;
    double moved = 0.0;
    while (step >= kMinStep) {
      for (size_t m = 0; m < m_count; ++m) {
        z[m] = res.x.x[m] + step * grad[m];
      }
      y = project_feasible(z, g);
      double ascent = 0.0;
      moved = 0.0;
      for (size_t m = 0; m < m_count; ++m) {
        const double dm = y.x[m] - res.x.x[m];
        ascent += grad[m] * dm;
        moved = std::max(moved, std::abs(dm));
      }
      if (moved == 0.0) {
        break; // projected gradient vanishes: stationary
      }
      std::fill(trial_grad.begin(), trial_grad.end(), 0.0);
      const auto v = f(y, trial_grad);
      if (v && *v >= res.objective + kArmijo * ascent) {
        accepted = true;
        y_value = *v;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.converged = true;
      break;
    }
    const double gain = y_value - res.objective;
    res.x = std::move(y);
    res.objective = y_value;
    grad.swap(trial_grad);
    step = std::min(step * 2.0, kMaxStep);
    if (moved < opts.step_tol || gain <= 1e-15 * (1.0 + std::abs(res.objective))) {
      res.converged = true;
      ++res.iterations;
      break;
    }
  }
  return res;
}

RateUtility weighted_utility(std::span<const double> mu) {
  RateUtility u;
  std::vector<double> w(mu.begin(), mu.end());
  for (double v : w) {
    u.used.push_back(v != 0.0);
  }
  u.value = [w](std::span<const double> r) {
    double total = 0.0;
    for (size_t k = 0; k < w.size(); ++k) {
      if (w[k] != 0.0) {
        total += w[k] * r[k];
      }
    }
    return total;
  };
  u.gradient = [w](std::span<const double>, std::span<double> grad) {
    std::copy(w.begin(), w.end(), grad.begin());
  };
  return u;
}

RateUtility softmin_utility(int num_users, double tau) {
  RateUtility u;
  u.used.assign(static_cast<size_t>(num_users), true);
  u.value = [tau](std::span<const double> r) {
    const double lo = *std::min_element(r.begin(), r.end());
    double sum = 0.0;
    for (double v : r) {
      sum += std::exp(-(v - lo) / tau);
    }
    return lo - tau * std::log(sum);
  };
  u.gradient = [tau](std::span<const double> r, std::span<double> grad) {
    const double lo = *std::min_element(r.begin(), r.end());
    double sum = 0.0;
    for (size_t k = 0; k < r.size(); ++k) {
      grad[k] = std::exp(-(r[k] - lo) / tau);
      sum += grad[k];
    }
    for (double& g : grad) {
      g /= sum;
    }
  };
  return u;
}

SubproblemResult solve_subproblem(const Scenario& s, const RateUtility& u,
                                  const DeploymentPattern& anchor) {
  const auto coeffs = build_surrogates(s, anchor);
  const auto powers = s.normalized_powers();
  std::vector<SeparableQuadratic> quads;
  quads.reserve(coeffs.size());
  for (const auto& c : coeffs) {
    quads.push_back(surrogate_quadratic(c));
  }
  const double inv_ln2 = 1.0 / std::numbers::ln2;
  std::vector<double> rates(quads.size(), 0.0);
  std::vector<double> args(quads.size(), 1.0);
  std::vector<double> du(quads.size(), 0.0);
  const ConcaveObjective objective = [&](const DeploymentPattern& x,
                                         std::span<double> grad) -> std::optional<double> {
    for (size_t k = 0; k < quads.size(); ++k) {
      if (!u.used[k]) {
        continue;
      }
      args[k] = 1.0 + powers[k] * quads[k].value(x);
      if (args[k] <= kLogDomainFloor) {
        return std::nullopt;
      }
      rates[k] = std::log2(args[k]);
    }
    u.gradient(rates, du);
    std::fill(grad.begin(), grad.end(), 0.0);
    for (size_t k = 0; k < quads.size(); ++k) {
      if (u.used[k]) {
        quads[k].add_gradient(x, du[k] * powers[k] * inv_ln2 / args[k], grad);
      }
    }
    return u.value(rates);
  };
  return projected_gradient_ascent(s.geometry, anchor, objective);
}

SubproblemResult solve_subproblem(const Scenario& s, std::span<const double> mu,
                                  const DeploymentPattern& anchor) {
  return solve_subproblem(s, weighted_utility(mu), anchor);
}

ScaResult sca_maximize(const Scenario& s, const RateUtility& u, const DeploymentPattern& x_init,
                       const SolverConfig& cfg) {
  if (!is_feasible(x_init, s.geometry)) {
    throw ConfigError("x_init", "initial pattern is infeasible");
  }
  const auto true_value = [&](const DeploymentPattern& x) {
    return u.value(rate_vector(s, x).rates);
  };
  ScaResult res;
  res.x = project_feasible(x_init.x, s.geometry);
  res.objective = true_value(res.x);
  res.trace.iterates.push_back(res.x);
  res.trace.objectives.push_back(res.objective);

  std::vector<double> z(res.x.x.size());
  for (int it = 0; it < cfg.sca_max_iters; ++it) {
    const auto sub = solve_subproblem(s, u, res.x);
    DeploymentPattern x_next = sub.x;
    double next = true_value(x_next);
    // The Taylor curvature bound is loose, so the surrogate maximizer lands
    // well short of the true ascent. Extrapolate along the SCA step while the
    // true objective keeps increasing; every accepted point still improves on
    // the anchor, so the sequence stays monotone.
    for (double alpha = 2.0; alpha <= kMaxExtrapolation && next >= res.objective; alpha *= 2.0) {
      for (size_t m = 0; m < z.size(); ++m) {
        z[m] = res.x.x[m] + alpha * (sub.x.x[m] - res.x.x[m]);
      }
      DeploymentPattern y = project_feasible(z, s.geometry);
      if (chebyshev_distance(y, x_next) < 1e-12) {
        break;
      }
      const double v = true_value(y);
      if (v <= next) {
        break;
      }
      x_next = std::move(y);
      next = v;
    }
    if (next < res.objective) {
      // Only reachable through rounding: the surrogate is tight at the anchor.
      res.trace.converged = true;
      break;
    }
    const double rel = (next - res.objective) / std::max(std::abs(res.objective), 1e-300);
    res.x = std::move(x_next);
    res.objective = next;
    res.trace.iterates.push_back(res.x);
    res.trace.objectives.push_back(res.objective);
    if (rel < cfg.sca_rel_tol) {
      res.trace.converged = true;
      break;
    }
  }
  return res;
}

ScaResult sca_iterate(const Scenario& s, std::span<const double> mu,
                      const DeploymentPattern& x_init, const SolverConfig& cfg) {
  return sca_maximize(s, weighted_utility(mu), x_init, cfg);
}

} // namespace matraj
