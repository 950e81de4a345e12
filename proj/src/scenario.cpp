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

#include "matraj/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>

namespace matraj {

using nlohmann::json;

std::vector<double> ArrayGeometry::vertical_positions() const {
  std::vector<double> y(static_cast<size_t>(antennas_per_track));
  for (size_t n = 0; n < y.size(); ++n) {
    y[n] = 0.5 * static_cast<double>(n);
  }
  return y;
}

void ArrayGeometry::validate() const {
  if (num_tracks < 1) {
    throw ConfigError("geometry.M", "must be >= 1");
  }
  if (antennas_per_track < 1) {
    throw ConfigError("geometry.N", "must be >= 1");
  }
  if (!(span > 0.0) || !std::isfinite(span)) {
    throw ConfigError("geometry.L", "must be > 0");
  }
  if (!(min_separation > 0.0) || !std::isfinite(min_separation)) {
    throw ConfigError("geometry.d_min", "must be > 0");
  }
  if (!(max_speed >= 0.0) || std::isnan(max_speed)) {
    throw ConfigError("geometry.V_max", "must be >= 0");
  }
  if ((num_tracks - 1) * min_separation > span) {
    throw ConfigError("geometry", "infeasible geometry: (M-1)*d_min > L");
  }
}

UserSpec::UserSpec(double elevation, double azimuth, double tx_power_dbm, double gain)
    : elevation_(elevation),
      azimuth_(azimuth),
      tx_power_dbm_(tx_power_dbm),
      gain_(gain),
      horizontal_aoa_(std::cos(elevation) * std::cos(azimuth)),
      vertical_aoa_(std::sin(elevation)) {}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double Scenario::normalized_power(int k) const {
  return dbm_to_mw(users.at(static_cast<size_t>(k)).tx_power_dbm()) / dbm_to_mw(noise_dbm);
}

std::vector<double> Scenario::normalized_powers() const {
  std::vector<double> p(users.size());
  for (int k = 0; k < num_users(); ++k) {
    p[static_cast<size_t>(k)] = normalized_power(k);
  }
  return p;
}

void Scenario::validate() const {
  geometry.validate();
  if (users.empty()) {
    throw ConfigError("users", "at least one user is required");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("horizon_T", "must be > 0");
  }
  if (!std::isfinite(noise_dbm)) {
    throw ConfigError("noise_dbm", "must be finite");
  }
  for (size_t k = 0; k < users.size(); ++k) {
    const auto& u = users[k];
    const std::string at = "users[" + std::to_string(k) + "]";
    if (!std::isfinite(u.elevation()) || !std::isfinite(u.azimuth())) {
      throw ConfigError(at + ".theta", "angles must be finite");
    }
    if (!std::isfinite(u.tx_power_dbm())) {
      throw ConfigError(at + ".power_dbm", "must be finite");
    }
    if (!(u.gain() > 0.0) || !std::isfinite(u.gain())) {
      throw ConfigError(at + ".beta", "must be finite and > 0");
    }
    const double p = normalized_power(static_cast<int>(k));
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw ConfigError(at + ".power_dbm", "normalized power must be finite and > 0");
    }
  }
}

void SolverConfig::validate(const ArrayGeometry& geometry) const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string("solver.") + name, "must be > 0");
    }
  };
  auto at_least_one = [](int v, const char* name) {
    if (v < 1) {
      throw ConfigError(std::string("solver.") + name, "must be >= 1");
    }
  };
  at_least_one(num_starts, "num_starts");
  at_least_one(sca_max_iters, "sca_max_iters");
  at_least_one(ellipsoid_max_iters, "ellipsoid_max_iters");
  positive(sca_rel_tol, "sca_rel_tol");
  positive(ellipsoid_tol, "ellipsoid_tol");
  positive(pattern_merge_tol, "pattern_merge_tol");
  positive(concurrent_max_rel_tol, "concurrent_max_rel_tol");
  positive(grid_step, "grid_step");
  if (quadrature_samples_per_segment < 2) {
    throw ConfigError("solver.quadrature_samples_per_segment", "must be >= 2");
  }
  if (grid_step > geometry.min_separation) {
    throw ConfigError("solver.grid_step", "must not exceed d_min");
  }
}

namespace {

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) {
      throw ConfigError(where.empty() ? it.key() : where + "." + it.key(), "unknown key");
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError(where.empty() ? key : where + "." + key, "missing");
  }
  return *it;
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) {
    throw ConfigError(field, "expected a number");
  }
  return v.get<double>();
}

int integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) {
    throw ConfigError(field, "expected an integer");
  }
  return v.get<int>();
}

double number_or(const json& obj, const char* key, const std::string& where, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, where + "." + key);
}

ArrayGeometry parse_geometry(const json& g, double& length_scale) {
  if (!g.is_object()) {
    throw ConfigError("geometry", "expected an object");
  }
  reject_unknown(g, "geometry", {"M", "N", "L", "d_min", "V_max", "units", "wavelength_m"});
  ArrayGeometry geo;
  geo.num_tracks = integer(require(g, "M", "geometry"), "geometry.M");
  geo.antennas_per_track = integer(require(g, "N", "geometry"), "geometry.N");
  geo.wavelength_m = number_or(g, "wavelength_m", "geometry", 0.0);

  std::string units = "wavelengths";
  if (auto it = g.find("units"); it != g.end()) {
    if (!it->is_string()) {
      throw ConfigError("geometry.units", "expected a string");
    }
    units = it->get<std::string>();
  }
  if (units == "wavelengths") {
    length_scale = 1.0;
  } else if (units == "meters") {
    if (!(geo.wavelength_m > 0.0)) {
      throw ConfigError("geometry.wavelength_m", "required and > 0 when units are meters");
    }
    length_scale = geo.wavelength_m;
  } else {
    throw ConfigError("geometry.units", "must be \"wavelengths\" or \"meters\"");
  }

  geo.span = number(require(g, "L", "geometry"), "geometry.L") / length_scale;
  geo.min_separation = number(require(g, "d_min", "geometry"), "geometry.d_min") / length_scale;
  geo.max_speed = number_or(g, "V_max", "geometry", 0.0) / length_scale;
  geo.validate();
  return geo;
}

UserSpec parse_user(const json& u, size_t index) {
  const std::string at = "users[" + std::to_string(index) + "]";
  if (!u.is_object()) {
    throw ConfigError(at, "expected an object");
  }
  reject_unknown(u, at, {"theta", "phi", "power_dbm", "beta", "path_loss"});
  const double theta = number(require(u, "theta", at), at + ".theta");
  const double phi = number(require(u, "phi", at), at + ".phi");
  const double power = number(require(u, "power_dbm", at), at + ".power_dbm");

  const bool direct = u.contains("beta");
  const bool path_loss = u.contains("path_loss");
  if (direct == path_loss) {
    throw ConfigError(at, "exactly one of beta or path_loss is required");
  }
  double beta = 0.0;
  if (direct) {
    beta = number(u.at("beta"), at + ".beta");
  } else {
    const json& pl = u.at("path_loss");
    const std::string where = at + ".path_loss";
    if (!pl.is_object()) {
      throw ConfigError(where, "expected an object");
    }
    reject_unknown(pl, where, {"beta0", "r", "alpha0"});
    const double beta0 = number(require(pl, "beta0", where), where + ".beta0");
    const double r = number(require(pl, "r", where), where + ".r");
    const double alpha0 = number(require(pl, "alpha0", where), where + ".alpha0");
    if (!(r > 0.0)) {
      throw ConfigError(where + ".r", "must be > 0");
    }
    beta = beta0 * std::pow(r, -alpha0);
  }
  return UserSpec(theta, phi, power, beta);
}

SolverConfig parse_solver(const json& s, double length_scale) {
  SolverConfig cfg;
  if (!s.is_object()) {
    throw ConfigError("solver", "expected an object");
  }
  reject_unknown(s, "solver",
                 {"num_starts", "sca_max_iters", "sca_rel_tol", "ellipsoid_max_iters",
                  "ellipsoid_tol", "pattern_merge_tol", "concurrent_max_rel_tol", "grid_step",
                  "quadrature_samples_per_segment", "rng_seed"});
  auto get_int = [&](const char* key, int& out) {
    if (auto it = s.find(key); it != s.end()) {
      out = integer(*it, std::string("solver.") + key);
    }
  };
  auto get_real = [&](const char* key, double& out, double scale) {
    if (auto it = s.find(key); it != s.end()) {
      out = number(*it, std::string("solver.") + key) / scale;
    }
  };
  get_int("num_starts", cfg.num_starts);
  get_int("sca_max_iters", cfg.sca_max_iters);
  get_int("ellipsoid_max_iters", cfg.ellipsoid_max_iters);
  get_int("quadrature_samples_per_segment", cfg.quadrature_samples_per_segment);
  get_real("sca_rel_tol", cfg.sca_rel_tol, 1.0);
  get_real("ellipsoid_tol", cfg.ellipsoid_tol, 1.0);
  get_real("concurrent_max_rel_tol", cfg.concurrent_max_rel_tol, 1.0);
  get_real("pattern_merge_tol", cfg.pattern_merge_tol, length_scale);
  get_real("grid_step", cfg.grid_step, length_scale);
  if (auto it = s.find("rng_seed"); it != s.end()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<long long>() >= 0)) {
      throw ConfigError("solver.rng_seed", "expected a non-negative integer");
    }
    cfg.rng_seed = it->get<std::uint64_t>();
  }
  return cfg;
}

} // namespace

Config parse_config(const json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("", "top level must be an object");
  }
  reject_unknown(doc, "", {"geometry", "users", "noise_dbm", "horizon_T", "solver"});
  Config cfg;
  double length_scale = 1.0;
  cfg.scenario.geometry = parse_geometry(require(doc, "geometry", ""), length_scale);

  const json& users = require(doc, "users", "");
  if (!users.is_array()) {
    throw ConfigError("users", "expected an array");
  }
  for (size_t k = 0; k < users.size(); ++k) {
    cfg.scenario.users.push_back(parse_user(users[k], k));
  }
  cfg.scenario.noise_dbm = number_or(doc, "noise_dbm", "", 0.0);
  cfg.scenario.horizon = number(require(doc, "horizon_T", ""), "horizon_T");
  cfg.scenario.validate();

  if (auto it = doc.find("solver"); it != doc.end()) {
    cfg.solver = parse_solver(*it, length_scale);
  }
  cfg.solver.validate(cfg.scenario.geometry);
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("", "cannot open " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("parse failure: ") + e.what());
  }
  return parse_config(doc);
}

Scenario load_scenario(const std::filesystem::path& path) { return load_config(path).scenario; }

json to_json(const Config& config) {
  const auto& s = config.scenario;
  const auto& g = s.geometry;
  json geometry = {{"M", g.num_tracks},
                   {"N", g.antennas_per_track},
                   {"L", g.span},
                   {"d_min", g.min_separation},
                   {"V_max", g.max_speed}};
  if (g.wavelength_m > 0.0) {
    geometry["wavelength_m"] = g.wavelength_m;
  }
  json users = json::array();
  for (const auto& u : s.users) {
    users.push_back({{"theta", u.elevation()},
                     {"phi", u.azimuth()},
                     {"power_dbm", u.tx_power_dbm()},
                     {"beta", u.gain()}});
  }
  const auto& c = config.solver;
  json solver = {{"num_starts", c.num_starts},
                 {"sca_max_iters", c.sca_max_iters},
                 {"sca_rel_tol", c.sca_rel_tol},
                 {"ellipsoid_max_iters", c.ellipsoid_max_iters},
                 {"ellipsoid_tol", c.ellipsoid_tol},
                 {"pattern_merge_tol", c.pattern_merge_tol},
                 {"concurrent_max_rel_tol", c.concurrent_max_rel_tol},
                 {"grid_step", c.grid_step},
                 {"quadrature_samples_per_segment", c.quadrature_samples_per_segment},
                 {"rng_seed", c.rng_seed}};
  return {{"geometry", geometry},
          {"users", users},
          {"noise_dbm", s.noise_dbm},
          {"horizon_T", s.horizon},
          {"solver", solver}};
}

std::string config_hash(const Config& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scenario apply_aoa_error(const Scenario& s, double error) {
  Scenario out = s;
  out.users.clear();
  for (const auto& u : s.users) {
    out.users.emplace_back(u.elevation() + error, u.azimuth() + error, u.tx_power_dbm(), u.gain());
  }
  return out;
}

} // namespace matraj
