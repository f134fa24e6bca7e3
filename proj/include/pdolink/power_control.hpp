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

#include <utility>
#include <vector>

#include "pdolink/common.hpp"

namespace pdolink::power {

/// Static open-loop power control parameters shared by PUSCH and SRS
/// (each channel carries its own instance).
struct PowerParams {
  double p_cmax_dbm = 23.0;
  double p_o_dbm = -80.0;
  /// Fractional pathloss compensation, in [0, 1].
  double alpha_pc = 1.0;
  /// Subcarrier spacing configuration, in {0..4}.
  int mu = 0;
};

/// Per-occasion dynamic terms. These are inputs taken from higher layers;
/// their derivation is out of scope here.
struct DynamicPowerState {
  double pathloss_db = 0.0;
  /// MCS-dependent adjustment; 0 for SRS.
  double delta_tf_db = 0.0;
  /// Closed-loop accumulation (f for PUSCH, h for SRS).
  double closed_loop_db = 0.0;
};

enum class TxKind { pusch, srs };

/// One transmitted PUSCH or SRS occasion. n_re_per_rb is the number of
/// occupied resource elements per RB and OFDM symbol: 12 for PUSCH, 12
/// divided by the transmission comb for SRS.
struct TxRecord {
  int slot = 0;
  TxKind kind = TxKind::pusch;
  double tx_power_dbm = 0.0;
  int n_rb = 1;
  int n_re_per_rb = 12;
};

/// Snapshot of transmission history at grant time. Histories are sorted by
/// slot ascending.
struct SchedulingContext {
  int grant_slot = 0;
  int k2 = 0;
  std::vector<TxRecord> pusch_history;
  std::vector<TxRecord> srs_history;
};

/// Open-loop transmit power in dBm:
/// min(p_cmax, p_o + 10 log10(2^mu * n_rb) + alpha * PL + dTF + loop).
/// Throws invalid_parameter on non-finite inputs, n_rb < 1, or parameter
/// invariant violations.
double tx_power(const PowerParams& params, const DynamicPowerState& state,
                int n_rb);

/// Power spectral density in dBm per resource element:
/// tx_power_dbm - 10 log10(n_rb * n_re_per_rb).
double power_density(const TxRecord& record);

/// The latest PUSCH and SRS records transmitted strictly before the grant
/// slot. Throws no_reference_error when either history has no eligible
/// record; callers fall back to a PDO of 0 dB in that case.
std::pair<TxRecord, TxRecord> latest_records(const SchedulingContext& ctx);

/// Power density offset in dB between a PUSCH record and an SRS record.
/// Throws invalid_parameter when the record kinds do not match their roles.
double compute_pdo(const TxRecord& pusch, const TxRecord& srs);

/// PDO at grant time from a scheduling context, with the 0 dB fallback
/// applied when a reference is missing.
double pdo_at_grant(const SchedulingContext& ctx);

}  // namespace pdolink::power
