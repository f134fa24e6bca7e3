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

#include <algorithm>
#include <cmath>

#include "pdolink/power_control.hpp"

namespace pdolink::power {

double tx_power(const PowerParams& params, const DynamicPowerState& state,
                int n_rb) {
  if (!std::isfinite(params.p_cmax_dbm) || !std::isfinite(params.p_o_dbm)) {
    throw invalid_parameter("tx_power: power parameters must be finite");
  }
  if (params.alpha_pc < 0.0 || params.alpha_pc > 1.0) {
    throw invalid_parameter("tx_power: alpha_pc outside [0, 1]");
  }
  if (params.mu < 0 || params.mu > 4) {
    throw invalid_parameter("tx_power: mu outside {0..4}");
  }
  if (n_rb < 1) {
    throw invalid_parameter("tx_power: n_rb must be >= 1");
  }
  if (!std::isfinite(state.pathloss_db) || state.pathloss_db < 0.0 ||
      !std::isfinite(state.delta_tf_db) ||
      !std::isfinite(state.closed_loop_db)) {
    throw invalid_parameter("tx_power: dynamic state must be finite, PL >= 0");
  }
  const double bandwidth_db =
      10.0 * std::log10(std::pow(2.0, params.mu) * static_cast<double>(n_rb));
  const double open_loop = params.p_o_dbm + bandwidth_db +
                           params.alpha_pc * state.pathloss_db +
                           state.delta_tf_db + state.closed_loop_db;
  return std::min(params.p_cmax_dbm, open_loop);
}

double power_density(const TxRecord& record) {
  if (record.n_rb < 1 || record.n_re_per_rb < 1 || record.n_re_per_rb > 12) {
    throw invalid_parameter("power_density: invalid RE geometry");
  }
  if (!std::isfinite(record.tx_power_dbm)) {
    throw invalid_parameter("power_density: tx_power_dbm must be finite");
  }
  const double n_re =
      static_cast<double>(record.n_rb) * static_cast<double>(record.n_re_per_rb);
  return record.tx_power_dbm - 10.0 * std::log10(n_re);
}

namespace {

const TxRecord* latest_before(const std::vector<TxRecord>& history,
                              int grant_slot) {
  const TxRecord* found = nullptr;
  for (const TxRecord& rec : history) {
    if (rec.slot >= grant_slot) {
      break;
    }
    found = &rec;
  }
  return found;
}

}  // namespace

std::pair<TxRecord, TxRecord> latest_records(const SchedulingContext& ctx) {
  const TxRecord* pusch = latest_before(ctx.pusch_history, ctx.grant_slot);
  const TxRecord* srs = latest_before(ctx.srs_history, ctx.grant_slot);
  if (pusch == nullptr) {
    throw no_reference_error("latest_records: no eligible PUSCH record");
  }
  if (srs == nullptr) {
    throw no_reference_error("latest_records: no eligible SRS record");
  }
  return {*pusch, *srs};
}

double compute_pdo(const TxRecord& pusch, const TxRecord& srs) {
  if (pusch.kind != TxKind::pusch || srs.kind != TxKind::srs) {
    throw invalid_parameter("compute_pdo: record kinds do not match roles");
  }
  return power_density(pusch) - power_density(srs);
}

double pdo_at_grant(const SchedulingContext& ctx) {
  try {
    const auto [pusch, srs] = latest_records(ctx);
    return compute_pdo(pusch, srs);
  } catch (const no_reference_error&) {
    return 0.0;
  }
}

}  // namespace pdolink::power
