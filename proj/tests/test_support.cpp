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

#include "test_support.hpp"

namespace matraj::test {

std::string config_path(const std::string& name) { return std::string(MATRAJ_CONFIG_DIR) + "/" + name; }

Config two_track() { return load_config(config_path("two_track.json")); }

Config two_track(double span) {
  Config c = two_track();
  c.scenario.geometry.span = span;
  return c;
}

Scenario single_user(int tracks, int antennas, double span) {
  Scenario s;
  s.geometry.num_tracks = tracks;
  s.geometry.antennas_per_track = antennas;
  s.geometry.span = span;
  s.geometry.min_separation = 0.5;
  s.users.emplace_back(0.4, 0.7, 10.0, 1.0);
  s.horizon = 100.0;
  return s;
}

} // namespace matraj::test
