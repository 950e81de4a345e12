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

// matraj command-line front end.
//
//   matraj solve    --scenario cfg.json --mode ideal|ssmt|static [--out result.json]
//   matraj sweep    --scenario cfg.json --axis L --range 14,16,18 [--mode all] [--out rows.csv]
//   matraj validate --scenario cfg.json [--quick]
//
// MATRAJ_THREADS caps the worker threads.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matraj/dual.hpp"
#include "matraj/linalg.hpp"
#include "matraj/pipeline.hpp"
#include "matraj/properties.hpp"
#include "matraj/scenario.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNotConverged = 3;

std::vector<matraj::Mode> parse_modes(const std::string& text) {
  if (text == "all") {
    return {matraj::Mode::Ideal, matraj::Mode::Ssmt, matraj::Mode::Static};
  }
  std::vector<matraj::Mode> modes;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    modes.push_back(matraj::parse_mode(tok));
  }
  return modes;
}

matraj::Config load(const std::string& path, const std::optional<std::uint64_t>& seed) {
  matraj::Config c = matraj::load_config(path);
  if (seed) {
    c.solver.rng_seed = *seed;
  }
  return c;
}

int write_or_print(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out_path);
  if (!f) {
    std::cerr << "error: cannot write " << out_path << '\n';
    return kExitFailure;
  }
  f << text;
  return 0;
}

int cmd_solve(const std::string& scenario, const std::string& mode_name,
              const std::optional<std::uint64_t>& seed, const std::string& out,
              const std::string& trace_path) {
  const matraj::Config c = load(scenario, seed);
  const matraj::Mode mode = matraj::parse_mode(mode_name);
  std::vector<matraj::DualTraceRow> trace;
  const auto result = matraj::solve(c, mode, nullptr, &trace);
  if (!trace_path.empty()) {
    std::ofstream f(trace_path);
    matraj::write_dual_trace_csv(f, trace);
  }
  if (!out.empty()) {
    if (const int rc = write_or_print(out, matraj::result_to_json(result, c).dump(2) + "\n")) {
      return rc;
    }
  }
  std::printf("mode %s: min average rate %.6f bits/s/Hz (gamma %d, t_swi %.4g s)\n",
              matraj::to_string(mode), result.min_rate, result.gamma, result.t_swi);
  if (!result.converged) {
    std::cerr << "warning: ellipsoid iteration cap reached before convergence\n";
    return kExitNotConverged;
  }
  return 0;
}

int cmd_sweep(const std::string& scenario, const std::string& axis_name, const std::string& range,
              const std::string& modes, const std::optional<std::uint64_t>& seed,
              const std::string& out, bool timing) {
  const matraj::Config c = load(scenario, seed);
  const auto axis = matraj::parse_axis(axis_name);
  const auto values = matraj::parse_range(range);
  const auto rows = matraj::run_sweep(c, axis, values, parse_modes(modes));
  std::ostringstream csv;
  matraj::write_sweep_csv(csv, rows, timing);
  return write_or_print(out.empty() ? "-" : out, csv.str());
}

int cmd_validate(const std::string& scenario, const std::optional<std::uint64_t>& seed,
                 bool quick) {
  const matraj::Config c = load(scenario, std::nullopt);
  matraj::PropertyOptions opts;
  if (seed) {
    opts.seed = *seed;
  }
  if (quick) {
    opts.channel_instances = 100;
    opts.beamformer_instances = 5;
    opts.beamformers_per_instance = 200;
    opts.surrogate_pairs = 100;
    opts.sca_starts = 10;
    opts.lp_instances = 15;
    opts.ordering_instances = 2;
    opts.coupling_segments = 100;
    opts.coupling_samples = 1000;
    opts.sandwich_scenarios = 5;
  }
  bool all = true;
  for (const auto& r : matraj::run_property_suite(c, opts)) {
    std::printf("%s  %-48s %s (%.1f s)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str(), r.seconds);
    all = all && r.passed;
  }
  return all ? 0 : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Movable-antenna trajectory design for max-min fair uplink rates"};
  app.require_subcommand(1);

  std::string scenario;
  std::string mode = "ideal";
  std::string out;
  std::string trace;
  std::string axis;
  std::string range;
  std::optional<std::uint64_t> seed;
  bool no_timing = false;
  bool quick = false;

  auto* solve = app.add_subcommand("solve", "Run one pipeline and write a result record");
  solve->add_option("--scenario", scenario, "Scenario config (JSON)")->required();
  solve->add_option("--mode", mode, "ideal, ssmt or static")->capture_default_str();
  solve->add_option("--seed", seed, "Override solver.rng_seed");
  solve->add_option("--out", out, "Result record path ('-' for stdout)");
  solve->add_option("--trace", trace, "Ellipsoid convergence trace (CSV)");

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and emit CSV rows");
  sweep->add_option("--scenario", scenario, "Scenario config (JSON)")->required();
  sweep->add_option("--axis", axis, "L, V_max, N, K, aoa_error or x1_curve")->required();
  sweep->add_option("--range", range, "start:stop:step or v1,v2,...")->required();
  sweep->add_option("--mode", mode, "Comma-separated modes or 'all'");
  sweep->add_option("--seed", seed, "Override solver.rng_seed");
  sweep->add_option("--out", out, "CSV path (stdout when omitted)");
  sweep->add_flag("--no-timing", no_timing, "Write wall_ms as 0 for byte-identical reruns");

  auto* validate = app.add_subcommand("validate", "Run the randomized property suite");
  validate->add_option("--scenario", scenario, "Scenario config (JSON)")->required();
  validate->add_option("--seed", seed, "Property suite seed");
  validate->add_flag("--quick", quick, "Smaller sample counts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      return cmd_solve(scenario, mode, seed, out, trace);
    }
    if (*sweep) {
      return cmd_sweep(scenario, axis, range, sweep->count("--mode") > 0 ? mode : "all", seed, out,
                       !no_timing);
    }
    return cmd_validate(scenario, seed, quick);
  } catch (const matraj::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
