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

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace matraj {

/// Raised when a configuration cannot be parsed or violates an invariant.
/// `field()` names the offending key using a dotted path ("geometry.L").
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Base-station array: M sliding tracks, each carrying a vertical ULA of N
/// antennas at half-wavelength spacing. Every length is in wavelengths.
struct ArrayGeometry {
  int num_tracks = 1;          // M
  int antennas_per_track = 1;  // N
  double span = 1.0;           // L
  double min_separation = 0.5; // d_min
  double max_speed = 0.0;      // V_max, wavelengths per second
  double wavelength_m = 0.0;   // informational only, 0 when unknown

  int num_elements() const { return num_tracks * antennas_per_track; }

  /// Vertical antenna coordinates on one track: 0, 1/2, ..., (N-1)/2.
  std::vector<double> vertical_positions() const;

  /// Throws ConfigError if any invariant fails.
  void validate() const;

  bool operator==(const ArrayGeometry&) const = default;
};

/// One single-antenna user. The virtual angles of arrival are derived once
/// at construction and cannot drift from the physical angles.
class UserSpec {
public:
  UserSpec(double elevation, double azimuth, double tx_power_dbm, double gain);

  double elevation() const { return elevation_; }
  double azimuth() const { return azimuth_; }
  double tx_power_dbm() const { return tx_power_dbm_; }
  /// Large-scale fading coefficient (linear).
  double gain() const { return gain_; }
  /// cos(theta) * cos(phi): enters the horizontal (track) phase.
  double horizontal_aoa() const { return horizontal_aoa_; }
  /// sin(theta): enters the vertical phase.
  double vertical_aoa() const { return vertical_aoa_; }

  bool operator==(const UserSpec&) const = default;

private:
  double elevation_;
  double azimuth_;
  double tx_power_dbm_;
  double gain_;
  double horizontal_aoa_;
  double vertical_aoa_;
};

struct Scenario {
  ArrayGeometry geometry;
  std::vector<UserSpec> users;
  double noise_dbm = 0.0;
  double horizon = 1.0; // T, seconds

  int num_users() const { return static_cast<int>(users.size()); }

  /// P_k / sigma^2 as a linear ratio.
  double normalized_power(int k) const;
  std::vector<double> normalized_powers() const;

  void validate() const;

  bool operator==(const Scenario&) const = default;
};

struct SolverConfig {
  int num_starts = 16;
  int sca_max_iters = 100;
  double sca_rel_tol = 1e-5;
  int ellipsoid_max_iters = 500;
  double ellipsoid_tol = 1e-4;
  double pattern_merge_tol = 0.05;
  double concurrent_max_rel_tol = 1e-3;
  double grid_step = 0.01;
  int quadrature_samples_per_segment = 200;
  std::uint64_t rng_seed = 1;

  void validate(const ArrayGeometry& geometry) const;
  bool operator==(const SolverConfig&) const = default;
};

struct Config {
  Scenario scenario;
  SolverConfig solver;
};

double dbm_to_mw(double dbm);

/// Parses the structured-text schema documented in README.md.
Config parse_config(const nlohmann::json& doc);
Config load_config(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical form: lengths in wavelengths, gains resolved to `beta`.
nlohmann::json to_json(const Config& config);

/// FNV-1a hash of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const Config& config);

/// Copy of `s` with every elevation and azimuth shifted by `error` radians.
Scenario apply_aoa_error(const Scenario& s, double error);

} // namespace matraj
