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
#include <numbers>

#include "matraj/scenario.hpp"
#include "test_support.hpp"

using namespace matraj;
using Catch::Matchers::WithinRel;
using nlohmann::json;

namespace {

json base_doc() {
  return json::parse(R"({
    "geometry": {"M": 2, "N": 3, "L": 20, "d_min": 0.5, "V_max": 1},
    "users": [{"theta": 0.4, "phi": 0.5, "power_dbm": 10, "beta": 1}],
    "horizon_T": 100
  })");
}

std::string error_field(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

} // namespace

TEST_CASE("bundled two-track config resolves to Pbar*beta = 10 for every user") {
  const Config c = test::two_track();
  const Scenario& s = c.scenario;
  REQUIRE(s.num_users() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK_THAT(s.normalized_power(k) * s.users[static_cast<size_t>(k)].gain(),
               WithinRel(10.0, 1e-12));
  }
  CHECK_THAT(s.users[0].elevation(), WithinRel(std::numbers::pi / 7, 1e-15));
  CHECK_THAT(s.users[2].azimuth(), WithinRel(std::numbers::pi / 5.8, 1e-15));
}

TEST_CASE("path-loss users resolve beta = beta0 r^-alpha0") {
  json doc = base_doc();
  doc["users"][0].erase("beta");
  doc["users"][0]["path_loss"] = {{"beta0", 1e-3}, {"r", 1e3}, {"alpha0", 2}};
  const Config c = parse_config(doc);
  CHECK_THAT(c.scenario.users[0].gain(), WithinRel(1e-9, 1e-12));
}

TEST_CASE("the path-loss config lands on the same normalized power as the direct one") {
  const Config a = test::two_track();
  const Config b = load_config(test::config_path("circle_users.json"));
  for (int k = 0; k < 3; ++k) {
    const auto i = static_cast<size_t>(k);
    CHECK_THAT(b.scenario.normalized_power(k) * b.scenario.users[i].gain(),
               WithinRel(a.scenario.normalized_power(k) * a.scenario.users[i].gain(), 1e-12));
  }
}

TEST_CASE("virtual angles follow the physical angles") {
  const UserSpec u(0.3, 1.1, 0.0, 1.0);
  CHECK_THAT(u.horizontal_aoa(), WithinRel(std::cos(0.3) * std::cos(1.1), 1e-15));
  CHECK_THAT(u.vertical_aoa(), WithinRel(std::sin(0.3), 1e-15));
}

TEST_CASE("config errors name the offending field") {
  json doc = base_doc();
  SECTION("infeasible geometry") {
    doc["geometry"]["L"] = 0.4;
    CHECK(error_field(doc) == "geometry");
    try {
      parse_config(doc);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("infeasible geometry") != std::string::npos);
    }
  }
  SECTION("unknown key") {
    doc["geometry"]["speed"] = 3;
    CHECK(error_field(doc) == "geometry.speed");
  }
  SECTION("missing key") {
    doc.erase("horizon_T");
    CHECK(error_field(doc) == "horizon_T");
  }
  SECTION("non-integer track count") {
    doc["geometry"]["M"] = 2.5;
    CHECK(error_field(doc) == "geometry.M");
  }
  SECTION("no users") {
    doc["users"] = json::array();
    CHECK(error_field(doc) == "users");
  }
  SECTION("bad path loss distance") {
    doc["users"][0].erase("beta");
    doc["users"][0]["path_loss"] = {{"beta0", 1e-3}, {"r", 0}, {"alpha0", 2}};
    CHECK(error_field(doc) == "users[0].path_loss.r");
  }
  SECTION("solver tolerance") {
    doc["solver"] = {{"ellipsoid_tol", -1}};
    CHECK(error_field(doc).rfind("solver", 0) == 0);
  }
}

TEST_CASE("lengths in meters are converted with the wavelength") {
  json doc = base_doc();
  doc["geometry"] = {{"M", 2}, {"N", 3}, {"L", 0.2}, {"d_min", 0.005}, {"units", "meters"},
                     {"wavelength_m", 0.01}};
  const Config c = parse_config(doc);
  CHECK_THAT(c.scenario.geometry.span, WithinRel(20.0, 1e-12));
  CHECK_THAT(c.scenario.geometry.min_separation, WithinRel(0.5, 1e-12));
}

TEST_CASE("canonical JSON round-trips and the hash tracks content") {
  const Config c = test::two_track();
  const Config back = parse_config(to_json(c));
  CHECK(back.scenario == c.scenario);
  CHECK(back.solver == c.solver);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(config_hash(c).size() == 16);
  Config other = c;
  other.solver.rng_seed += 1;
  CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("angle error shifts every elevation and azimuth") {
  const Scenario s = test::two_track().scenario;
  CHECK(apply_aoa_error(s, 0.0) == s);
  const Scenario e = apply_aoa_error(s, 0.05);
  for (size_t k = 0; k < s.users.size(); ++k) {
    CHECK_THAT(e.users[k].elevation(), WithinRel(s.users[k].elevation() + 0.05, 1e-15));
    CHECK_THAT(e.users[k].azimuth(), WithinRel(s.users[k].azimuth() + 0.05, 1e-15));
    CHECK(e.users[k].gain() == s.users[k].gain());
  }
}
