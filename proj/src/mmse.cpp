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

#include "matraj/mmse.hpp"

#include <algorithm>
#include <cmath>

#include "matraj/kernels.hpp"

namespace matraj {

namespace {

// 1 - Pbar_k q equals 1 / (1 + SINR_k); below this the downdate loses too
// many digits and the per-user factorization is used instead.
constexpr double kDowndateFloor = 1e-6;

} // namespace

double RateVector::min_rate() const { return *std::min_element(rates.begin(), rates.end()); }

int RateVector::argmin() const {
  return static_cast<int>(std::min_element(rates.begin(), rates.end()) - rates.begin());
}

CMatrix interference_matrix(std::span<const CVector> channels, std::span<const double> powers,
                            int k) {
  const int n = static_cast<int>(channels.front().size());
  CMatrix a = CMatrix::identity(n);
  for (size_t j = 0; j < channels.size(); ++j) {
    if (static_cast<int>(j) != k) {
      a.add_rank_one(channels[j], powers[j]);
    }
  }
  return a;
}

CMatrix interference_matrix(const Scenario& s, int k, const DeploymentPattern& p) {
  const auto channels = channel_vectors(s, p);
  const auto powers = s.normalized_powers();
  return interference_matrix(channels, powers, k);
}

double normalized_gain(std::span<const CVector> channels, std::span<const double> powers, int k) {
  const CVector& h = channels[static_cast<size_t>(k)];
  const Cholesky chol(interference_matrix(channels, powers, k));
  const CVector g = chol.solve(h);
  const cd q = kernels::dotc(h, g);
  if (std::abs(q.imag()) > kQuadFormImagTol * std::abs(q.real())) {
    throw NumericalError("MMSE quadratic form has a non-negligible imaginary part");
  }
  return q.real();
}

double normalized_gain(const Scenario& s, int k, const DeploymentPattern& p) {
  const auto channels = channel_vectors(s, p);
  const auto powers = s.normalized_powers();
  return normalized_gain(channels, powers, k);
}

double mmse_sinr(const Scenario& s, int k, const DeploymentPattern& p) {
  const auto channels = channel_vectors(s, p);
  const auto powers = s.normalized_powers();
  return powers[static_cast<size_t>(k)] * normalized_gain(channels, powers, k);
}

RateVector rate_vector(std::span<const CVector> channels, std::span<const double> powers) {
  RateVector out;
  out.rates.resize(channels.size());
  out.sinrs.resize(channels.size());

  // One factorization of Q = I + sum_j Pbar_j h_j h_j^H serves every user:
  // with q = h_k^H Q^-1 h_k, h_k^H A_k^-1 h_k = q / (1 - Pbar_k q).
  const int n = static_cast<int>(channels.front().size());
  CMatrix q_mat = CMatrix::identity(n);
  for (size_t j = 0; j < channels.size(); ++j) {
    q_mat.add_rank_one(channels[j], powers[j]);
  }
  const Cholesky chol(q_mat);
  for (size_t k = 0; k < channels.size(); ++k) {
    const cd q = kernels::dotc(channels[k], chol.solve(channels[k]));
    const double denom = 1.0 - powers[k] * q.real();
    double gain = 0.0;
    if (denom > kDowndateFloor &&
        std::abs(q.imag()) <= kQuadFormImagTol * std::abs(q.real())) {
      gain = q.real() / denom;
    } else {
      gain = normalized_gain(channels, powers, static_cast<int>(k));
    }
    const double sinr = powers[k] * gain;
    out.sinrs[k] = sinr;
    out.rates[k] = std::log2(1.0 + sinr);
  }
  return out;
}

RateVector rate_vector(const Scenario& s, const DeploymentPattern& p) {
  const auto channels = channel_vectors(s, p);
  const auto powers = s.normalized_powers();
  return rate_vector(channels, powers);
}

double beamformer_sinr(std::span<const CVector> channels, std::span<const double> powers, int k,
                       std::span<const cd> w) {
  double signal = 0.0;
  double interference = squared_norm(w);
  for (size_t j = 0; j < channels.size(); ++j) {
    const double gain = std::norm(kernels::dotc(w, channels[j])) * powers[j];
    if (static_cast<int>(j) == k) {
      signal = gain;
    } else {
      interference += gain;
    }
  }
  return signal / interference;
}

} // namespace matraj
