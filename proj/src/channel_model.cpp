/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 the pdolink authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "pdolink/channel_model.hpp"
#include "pdolink/common.hpp"
#include "pdolink/kernels.hpp"

namespace pdolink::chan {

namespace {

constexpr std::uint64_t kTagFading = 0x66616465ull;
constexpr std::uint64_t kTagEstimate = 0x65737431ull;

void validate(const ChannelProfile& profile, const GridConfig& grid) {
  if (profile.tap_delays_ns.size() != profile.tap_powers_db.size() ||
      profile.tap_delays_ns.empty()) {
    throw invalid_parameter("ChannelProfile: tap lists empty or mismatched");
  }
  if (profile.doppler_hz < 0.0 || profile.n_tx < 1 || profile.n_rx < 1 ||
      profile.n_tx > CMat::kMaxDim || profile.n_rx > CMat::kMaxDim) {
    throw invalid_parameter("ChannelProfile: bad doppler or antenna counts");
  }
  if (grid.n_rbg < 1 || grid.rbs_per_rbg < 1 ||
      grid.subcarrier_spacing_hz <= 0.0) {
    throw invalid_parameter("GridConfig: bad grid geometry");
  }
  if (grid.srs_comb != 2 && grid.srs_comb != 4) {
    throw invalid_parameter("GridConfig: srs_comb must be 2 or 4");
  }
}

}  // namespace

FadingChannel::FadingChannel(const ChannelProfile& profile,
                             const GridConfig& grid, std::uint64_t seed,
                             int n_sinusoids) {
  validate(profile, grid);
  if (n_sinusoids < 4) {
    throw invalid_parameter("FadingChannel: need at least 4 sinusoids");
  }
  n_tx_ = profile.n_tx;
  n_rx_ = profile.n_rx;
  n_rbg_ = grid.n_rbg;
  n_taps_ = static_cast<int>(profile.tap_delays_ns.size());
  n_sin_ = n_sinusoids;
  slot_duration_s_ = grid.slot_duration_s();

  double total = 0.0;
  for (double p : profile.tap_powers_db) {
    total += db_to_linear(p);
  }
  tap_amp_.resize(n_taps_);
  for (int i = 0; i < n_taps_; ++i) {
    tap_amp_[i] = std::sqrt(db_to_linear(profile.tap_powers_db[i]) / total /
                            n_sin_);
  }

  // Per-RBG phasor of each tap, evaluated at the RBG center frequency
  // relative to the band center.
  const double n_sc = static_cast<double>(grid.n_rbg) * grid.rbs_per_rbg * 12;
  rbg_phase_.resize(static_cast<std::size_t>(n_taps_) * n_rbg_);
  for (int i = 0; i < n_taps_; ++i) {
    const double tau = profile.tap_delays_ns[i] * 1e-9;
    for (int b = 0; b < n_rbg_; ++b) {
      const double center_sc =
          (b + 0.5) * grid.rbs_per_rbg * 12 - 0.5 * n_sc;
      const double freq = center_sc * grid.subcarrier_spacing_hz;
      const double ph = -2.0 * M_PI * freq * tau;
      rbg_phase_[static_cast<std::size_t>(i) * n_rbg_ + b] =
          cd(std::cos(ph), std::sin(ph));
    }
  }

  const std::size_t n_paths =
      static_cast<std::size_t>(n_taps_) * n_rx_ * n_tx_ * n_sin_;
  omega_.resize(n_paths);
  phi_.resize(n_paths);
  Rng rng(substream(seed, kTagFading));
  const double wd = 2.0 * M_PI * profile.doppler_hz;
  for (std::size_t p = 0; p < n_paths; ++p) {
    const double theta = 2.0 * M_PI * rng.uniform();
    omega_[p] = wd * std::cos(theta);
    phi_[p] = 2.0 * M_PI * rng.uniform();
  }
}

ChannelRealization FadingChannel::realize(int slot) const {
  ChannelRealization out;
  out.slot = slot;
  out.noise_cov = CMat::identity(n_rx_);
  out.per_rbg_h.assign(n_rbg_, CMat(n_rx_, n_tx_));

  const double t = slot * slot_duration_s_;
  const auto& backend = kern::active();
  std::vector<cd> gains(static_cast<std::size_t>(n_rx_) * n_tx_);
  for (int tap = 0; tap < n_taps_; ++tap) {
    for (int rx = 0; rx < n_rx_; ++rx) {
      for (int tx = 0; tx < n_tx_; ++tx) {
        const std::size_t base =
            ((static_cast<std::size_t>(tap) * n_rx_ + rx) * n_tx_ + tx) *
            n_sin_;
        gains[static_cast<std::size_t>(rx) * n_tx_ + tx] =
            tap_amp_[tap] *
            backend.cis_sum(omega_.data() + base, phi_.data() + base, n_sin_,
                            t);
      }
    }
    for (int b = 0; b < n_rbg_; ++b) {
      const cd u = rbg_phase_[static_cast<std::size_t>(tap) * n_rbg_ + b];
      backend.caxpy(u, gains.data(), out.per_rbg_h[b].data(),
                    n_rx_ * n_tx_);
    }
  }
  return out;
}

ChannelRealization realize(const ChannelProfile& profile,
                           const GridConfig& grid, int slot,
                           std::uint64_t seed) {
  return FadingChannel(profile, grid, seed).realize(slot);
}

ChannelRealization estimate_from_srs(const ChannelRealization& true_ch,
                                     const GridConfig& grid,
                                     double srs_density_dbm_per_re,
                                     double noise_dbm_per_re,
                                     std::uint64_t seed) {
  if (true_ch.per_rbg_h.empty()) {
    throw invalid_parameter("estimate_from_srs: empty realization");
  }
  const int n_rx = true_ch.per_rbg_h[0].rows();
  ChannelRealization est;
  est.slot = true_ch.slot;
  est.per_rbg_h = true_ch.per_rbg_h;

  if (noise_dbm_per_re == -std::numeric_limits<double>::infinity()) {
    est.noise_cov = CMat(n_rx, n_rx);
    return est;
  }
  if (!std::isfinite(srs_density_dbm_per_re) ||
      !std::isfinite(noise_dbm_per_re)) {
    throw invalid_parameter("estimate_from_srs: non-finite densities");
  }

  const double var = db_to_linear(noise_dbm_per_re - srs_density_dbm_per_re) /
                     grid.srs_res_per_rbg();
  const double sigma = std::sqrt(var);
  Rng rng(substream(seed, kTagEstimate));
  for (CMat& h : est.per_rbg_h) {
    for (int i = 0; i < h.rows(); ++i) {
      for (int j = 0; j < h.cols(); ++j) {
        h(i, j) += sigma * rng.cgauss();
      }
    }
  }
  est.noise_cov = scale(CMat::identity(n_rx), cd(var, 0.0));
  return est;
}

ChannelProfile load_profile(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_profile: cannot open " + path);
  }
  nlohmann::json doc;
  in >> doc;
  if (!doc.contains("profiles") || !doc["profiles"].contains(name)) {
    throw std::runtime_error("load_profile: no profile '" + name + "' in " +
                             path);
  }
  const nlohmann::json& p = doc["profiles"][name];
  ChannelProfile profile;
  profile.name = name;
  profile.tap_delays_ns = p.at("tap_delays_ns").get<std::vector<double>>();
  profile.tap_powers_db = p.at("tap_powers_db").get<std::vector<double>>();
  return profile;
}

}  // namespace pdolink::chan
