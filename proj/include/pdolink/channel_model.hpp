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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdolink/linalg.hpp"

namespace pdolink::chan {

/// Tapped-delay-line multipath profile with classical Doppler. Linear tap
/// powers are normalized to sum to 1 when the profile is used, so the
/// average per-entry channel power is 1.
struct ChannelProfile {
  std::string name;
  std::vector<double> tap_delays_ns;
  std::vector<double> tap_powers_db;
  double doppler_hz = 0.0;
  int n_tx = 1;
  int n_rx = 1;
};

/// Frequency grid. SRS occupies every srs_comb-th subcarrier.
struct GridConfig {
  int n_rbg = 1;
  int rbs_per_rbg = 4;
  double subcarrier_spacing_hz = 30e3;
  int srs_comb = 4;

  int srs_res_per_rbg() const { return rbs_per_rbg * 12 / srs_comb; }
  /// Slot duration in seconds for the numerology implied by the spacing.
  double slot_duration_s() const {
    return 1e-3 * 15e3 / subcarrier_spacing_hz;
  }
};

/// Per-RBG channel matrices at one slot. For outputs of realize() this is
/// the true propagation channel and noise_cov is identity; for outputs of
/// estimate_from_srs() the matrices are estimates and noise_cov holds the
/// estimation error covariance.
struct ChannelRealization {
  std::vector<CMat> per_rbg_h;
  CMat noise_cov;
  int slot = 0;
};

/// Sum-of-sinusoids Rayleigh fading ensemble bound to (profile, grid, seed).
/// Each tap and antenna pair carries n_sinusoids plane waves with uniform
/// angles, giving the classical Doppler spectrum and a J0 temporal
/// autocorrelation across slots. Realizations at different slots share the
/// ensemble, so the process is continuous in time.
class FadingChannel {
 public:
  FadingChannel(const ChannelProfile& profile, const GridConfig& grid,
                std::uint64_t seed, int n_sinusoids = 32);

  ChannelRealization realize(int slot) const;

  int n_tx() const { return n_tx_; }
  int n_rx() const { return n_rx_; }

 private:
  int n_tx_;
  int n_rx_;
  int n_rbg_;
  int n_taps_;
  int n_sin_;
  double slot_duration_s_;
  std::vector<double> tap_amp_;            // sqrt(P_i / N)
  std::vector<cd> rbg_phase_;              // [tap * n_rbg + b]
  std::vector<double> omega_;              // [(tap, rx, tx) * n_sin + k]
  std::vector<double> phi_;
};

/// One-shot realization; equivalent to FadingChannel(...).realize(slot).
ChannelRealization realize(const ChannelProfile& profile,
                           const GridConfig& grid, int slot,
                           std::uint64_t seed);

/// Least-squares SRS channel estimate: the true per-RBG matrix plus white
/// complex Gaussian error with variance
///   sigma_n^2 / (P_srs_linear * n_srs_res_per_rbg),
/// where both densities are per RE. A noise density of -inf dBm returns the
/// true channel unchanged.
ChannelRealization estimate_from_srs(const ChannelRealization& true_ch,
                                     const GridConfig& grid,
                                     double srs_density_dbm_per_re,
                                     double noise_dbm_per_re,
                                     std::uint64_t seed);

/// Named profile presets (tap tables from the standard multipath models)
/// loaded from the versioned data file. Antenna counts and Doppler are
/// filled by the caller.
ChannelProfile load_profile(const std::string& path, const std::string& name);

}  // namespace pdolink::chan
