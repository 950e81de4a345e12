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

#include <span>
#include <vector>

#include "matraj/channel.hpp"
#include "matraj/linalg.hpp"
#include "matraj/scenario.hpp"

namespace matraj {

/// Relative size of Im(h^H A^-1 h) tolerated before the SINR evaluation is
/// declared a numerical breakdown.
inline constexpr double kQuadFormImagTol = 1e-10;

struct RateVector {
  std::vector<double> rates; // log2(1 + sinr), bits/s/Hz
  std::vector<double> sinrs;

  double min_rate() const;
  int argmin() const;
};

/// I + sum_{j != k} Pbar_j h_j h_j^H
CMatrix interference_matrix(const Scenario& s, int k, const DeploymentPattern& p);
CMatrix interference_matrix(std::span<const CVector> channels, std::span<const double> powers,
                            int k);

/// Interference-normalized gain h_k^H A_k^-1 h_k (no transmit power).
double normalized_gain(std::span<const CVector> channels, std::span<const double> powers, int k);
double normalized_gain(const Scenario& s, int k, const DeploymentPattern& p);

/// MMSE output SINR Pbar_k h_k^H A_k^-1 h_k.
double mmse_sinr(const Scenario& s, int k, const DeploymentPattern& p);

RateVector rate_vector(const Scenario& s, const DeploymentPattern& p);

/// Rates with precomputed channels/powers (hot paths in the solvers).
RateVector rate_vector(std::span<const CVector> channels, std::span<const double> powers);

/// SINR achieved by an arbitrary receive beamformer w for user k.
double beamformer_sinr(std::span<const CVector> channels, std::span<const double> powers, int k,
                       std::span<const cd> w);

} // namespace matraj
