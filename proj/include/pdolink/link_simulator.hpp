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

#include "pdolink/channel_model.hpp"
#include "pdolink/csi_engine.hpp"
#include "pdolink/mcs_mapping.hpp"
#include "pdolink/pdo_adaptation.hpp"
#include "pdolink/power_control.hpp"

namespace pdolink::sim {

/// Logistic PHY abstraction constants. The block success probability for
/// MCS k at received per-layer MI x is
///   sigmoid((x - c_k) / s_k)
/// with midpoint c_k = SE_k + offset_base + offset_per_qm * (q_m/2 - 1) and
/// slope s_k = slope_base + slope_per_se * SE_k. The midpoint sits above the
/// spectral efficiency because practical coding needs an MI margin, growing
/// with modulation order.
struct ErrorModelParams {
  double offset_base = 0.12;
  double offset_per_qm = 0.05;
  double slope_base = 0.045;
  double slope_per_se = 0.0075;
};

class BlockErrorModel {
 public:
  BlockErrorModel() = default;
  explicit BlockErrorModel(const ErrorModelParams& p) : p_(p) {}

  double midpoint(const mcs::McsEntry& e) const {
    return e.spectral_efficiency + p_.offset_base +
           p_.offset_per_qm * (e.q_m / 2.0 - 1.0);
  }

  double slope(const mcs::McsEntry& e) const {
    return p_.slope_base + p_.slope_per_se * e.spectral_efficiency;
  }

  double success_probability(double mi_per_layer,
                             const mcs::McsEntry& e) const;

  bool draw(double mi_per_layer, const mcs::McsEntry& e, Rng& rng) const;

  /// Adapter for mcs::calibrate.
  mcs::BlockErrorOracle oracle() const;

 private:
  ErrorModelParams p_;
};

/// One Monte-Carlo experiment: a Table-I style setting at a fixed imposed
/// PDO, swept over a PUSCH SNR grid.
struct Scenario {
  std::string id;
  chan::ChannelProfile profile;
  chan::GridConfig grid;
  /// PUSCH occupies the first n_rbg_pusch RBGs of the sounded band.
  int n_rbg_pusch = 2;
  /// Resource elements per RB counted toward the transport block
  /// (12 subcarriers times the data symbols per slot).
  int data_res_per_rb = 144;
  double pdo_db = 0.0;
  /// Per-RE PUSCH SNR grid in dB (the x axis; the SRS SNR is snr - pdo).
  std::vector<double> snr_grid_db;
  bool adaptation_on = true;
  int drops = 500;
  std::uint64_t seed = 1;
  adapt::AdaptationConfig adaptation;
  ErrorModelParams error_model;

  /// Open-loop power configuration. p_o_dbm is ignored and derived per SNR
  /// point so that the PUSCH density hits noise + snr and the SRS density
  /// noise + snr - pdo; the remaining fields feed Eq-style tx_power calls.
  power::PowerParams pusch_params;
  power::PowerParams srs_params;
  power::DynamicPowerState pusch_state;
  power::DynamicPowerState srs_state;
  int k2 = 3;
  double noise_dbm_per_re = -121.4;

  /// Scale the LS estimate by sqrt(1/(1 + est_var)) so its mean power
  /// matches the true channel's (the raw LS estimate carries the error
  /// energy on top of the channel energy).
  bool normalize_estimate = true;
  /// Static link-adaptation margin in dB. The scheduler evaluates MI with
  /// the assumed noise raised by this amount, which de-rates MCS selection
  /// to absorb the systematic optimism of predicting from a sounded,
  /// interpolated channel (chord bias of the three-point curve plus
  /// estimate aging). Applied to scheduling only, never to the received
  /// signal, and identically in both adaptation modes.
  double scheduling_backoff_db = 1.5;
  int threads = 0;
  std::uint64_t config_hash = 0;
};

/// Per-drop outcome records.
struct DropRecord {
  double pdo_db = 0.0;
  int wb_ri = 0;
  int wb_tpmi = 0;
  std::vector<int> mcs_per_rbg;
  std::vector<double> received_mi_per_layer;
  std::vector<std::uint8_t> success;
  long delivered_bits = 0;
};

struct SnrPointResult {
  double snr_db = 0.0;
  double bler = 0.0;
  double throughput_bits_per_slot = 0.0;
  double mean_mcs = 0.0;
  long blocks = 0;
  long block_errors = 0;
};

struct SimResult {
  std::string scenario_id;
  bool adaptation_on = true;
  double pdo_db = 0.0;
  int drops = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<SnrPointResult> points;
};

struct SimDeps {
  const csi::CsiEngine* engine = nullptr;
  const mcs::McsTable* mcs_table = nullptr;
};

/// The scheduling context (latest PUSCH/SRS records before the grant) for
/// one SNR point, built through the tx_power path so the imposed PDO comes
/// out of compute_pdo on real records.
power::SchedulingContext make_power_context(const Scenario& scenario,
                                            double snr_db);

/// Simulates one drop: realize, estimate, schedule, transmit, draw block
/// errors. Deterministic in (scenario.seed, snr_index, drop_index); the
/// adaptation flag does not enter the seed derivation, so paired ON/OFF
/// runs share channel and noise realizations.
DropRecord run_drop(const Scenario& scenario, const SimDeps& deps,
                    double snr_db, int snr_index, int drop_index);

/// Full sweep: drops x SNR grid, aggregated. Drop loops run on
/// scenario.threads threads (0 = hardware concurrency) with a reduction
/// that is independent of scheduling order.
SimResult run_scenario(const Scenario& scenario, const SimDeps& deps);

/// (mean T_on - mean T_off) / mean T_off over the common SNR grid.
/// Returns +infinity when the OFF throughput is zero and the ON throughput
/// is not, and 0 when both are zero. Throws invalid_parameter on mismatched
/// grids.
double throughput_gain(const SimResult& on, const SimResult& off);

}  // namespace pdolink::sim
