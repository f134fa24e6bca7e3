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
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "pdolink/link_simulator.hpp"

namespace pdolink::sim {

namespace {

constexpr std::uint64_t kTagChannel = 0x6368616eull;
constexpr std::uint64_t kTagEstimate = 0x65737469ull;
constexpr std::uint64_t kTagError = 0x6572726full;

constexpr int kSrsSlot = 0;
constexpr int kGrantSlot = 1;

double derive_p_o(double target_density_dbm, const power::PowerParams& params,
                  const power::DynamicPowerState& state, int n_rb,
                  int n_re_per_rb) {
  const double bandwidth_db =
      10.0 * std::log10(std::pow(2.0, params.mu) * static_cast<double>(n_rb));
  const double re_db =
      10.0 * std::log10(static_cast<double>(n_rb) * n_re_per_rb);
  const double extras = params.alpha_pc * state.pathloss_db +
                        state.delta_tf_db + state.closed_loop_db;
  return target_density_dbm + re_db - bandwidth_db - extras;
}

}  // namespace

double BlockErrorModel::success_probability(double mi_per_layer,
                                            const mcs::McsEntry& e) const {
  const double z = (mi_per_layer - midpoint(e)) / slope(e);
  return 1.0 / (1.0 + std::exp(-z));
}

bool BlockErrorModel::draw(double mi_per_layer, const mcs::McsEntry& e,
                           Rng& rng) const {
  return rng.uniform() < success_probability(mi_per_layer, e);
}

mcs::BlockErrorOracle BlockErrorModel::oracle() const {
  const BlockErrorModel copy = *this;
  return [copy](double mi, const mcs::McsEntry& e, Rng& rng) {
    return copy.draw(mi, e, rng);
  };
}

power::SchedulingContext make_power_context(const Scenario& scenario,
                                            double snr_db) {
  const double pusch_density = scenario.noise_dbm_per_re + snr_db;
  const double srs_density = pusch_density - scenario.pdo_db;

  const int pusch_rbs = scenario.n_rbg_pusch * scenario.grid.rbs_per_rbg;
  const int srs_rbs = scenario.grid.n_rbg * scenario.grid.rbs_per_rbg;
  const int srs_res_per_rb = 12 / scenario.grid.srs_comb;

  power::PowerParams pusch_params = scenario.pusch_params;
  pusch_params.p_o_dbm = derive_p_o(pusch_density, pusch_params,
                                    scenario.pusch_state, pusch_rbs, 12);
  power::PowerParams srs_params = scenario.srs_params;
  srs_params.p_o_dbm = derive_p_o(srs_density, srs_params, scenario.srs_state,
                                  srs_rbs, srs_res_per_rb);

  power::TxRecord pusch;
  pusch.slot = kSrsSlot;
  pusch.kind = power::TxKind::pusch;
  pusch.n_rb = pusch_rbs;
  pusch.n_re_per_rb = 12;
  pusch.tx_power_dbm =
      power::tx_power(pusch_params, scenario.pusch_state, pusch_rbs);

  power::TxRecord srs;
  srs.slot = kSrsSlot;
  srs.kind = power::TxKind::srs;
  srs.n_rb = srs_rbs;
  srs.n_re_per_rb = srs_res_per_rb;
  srs.tx_power_dbm = power::tx_power(srs_params, scenario.srs_state, srs_rbs);

  power::SchedulingContext ctx;
  ctx.grant_slot = kGrantSlot;
  ctx.k2 = scenario.k2;
  ctx.pusch_history = {pusch};
  ctx.srs_history = {srs};
  return ctx;
}

DropRecord run_drop(const Scenario& scenario, const SimDeps& deps,
                    double snr_db, int snr_index, int drop_index) {
  if (deps.engine == nullptr || deps.mcs_table == nullptr) {
    throw invalid_parameter("run_drop: missing engine or MCS table");
  }
  if (scenario.n_rbg_pusch < 1 || scenario.n_rbg_pusch > scenario.grid.n_rbg) {
    throw invalid_parameter("run_drop: n_rbg_pusch outside sounded band");
  }

  const auto si = static_cast<std::uint64_t>(snr_index);
  const auto di = static_cast<std::uint64_t>(drop_index);

  // Power records and the PDO the scheduler observes.
  const power::SchedulingContext ctx = make_power_context(scenario, snr_db);
  const auto [pusch_rec, srs_rec] = power::latest_records(ctx);
  const double pdo_db = power::compute_pdo(pusch_rec, srs_rec);
  if (std::abs(pdo_db - scenario.pdo_db) > 1e-9) {
    throw config_error("run_drop: power setup does not realize the PDO");
  }
  const double srs_density = power::power_density(srs_rec);
  const double pusch_density = power::power_density(pusch_rec);
  const int pusch_slot = ctx.grant_slot + ctx.k2;

  // True channel at the SRS slot and at the granted PUSCH slot.
  const chan::FadingChannel fading(scenario.profile, scenario.grid,
                                   substream(scenario.seed, kTagChannel, si,
                                             di));
  const chan::ChannelRealization true_srs = fading.realize(kSrsSlot);
  const chan::ChannelRealization true_pusch = fading.realize(pusch_slot);

  // LS estimate from the SRS observation.
  const chan::ChannelRealization est = chan::estimate_from_srs(
      true_srs, scenario.grid, srs_density, scenario.noise_dbm_per_re,
      substream(scenario.seed, kTagEstimate, si, di));

  const int n_rx = scenario.profile.n_rx;
  const int n_rbg = scenario.grid.n_rbg;
  const double noise_var = db_to_linear(scenario.noise_dbm_per_re);
  const CMat w_common =
      whitening_matrix(scale(CMat::identity(n_rx), cd(noise_var, 0.0)));
  // The scheduler whitens against an inflated noise floor: a static margin
  // that de-rates selection against the optimism of interpolated, aged CSI.
  const double sched_noise_var =
      db_to_linear(scenario.noise_dbm_per_re + scenario.scheduling_backoff_db);
  const CMat w_sched = whitening_matrix(
      scale(CMat::identity(n_rx), cd(sched_noise_var, 0.0)));
  const std::vector<CMat> w(n_rbg, w_sched);

  // The scheduler sees the estimate at the SRS amplitude. The optional
  // normalization removes the LS error energy from the estimate's mean
  // power (the gNB knows the estimation variance).
  double est_gain = std::sqrt(db_to_linear(srs_density));
  if (scenario.normalize_estimate) {
    const double est_var = est.noise_cov.rows() > 0
                               ? est.noise_cov(0, 0).real()
                               : 0.0;
    est_gain /= std::sqrt(1.0 + est_var);
  }
  std::vector<CMat> h_sched(n_rbg);
  for (int b = 0; b < n_rbg; ++b) {
    h_sched[b] = scale(est.per_rbg_h[b], cd(est_gain, 0.0));
  }

  // Scheduling. The OFF baseline is the same pipeline evaluated at a PDO
  // of 0 dB, which by knot exactness equals MCS selection on the raw
  // estimate MI.
  const double scheduling_pdo = scenario.adaptation_on ? pdo_db : 0.0;
  const adapt::ScheduleDecision decision =
      adapt::schedule(*deps.engine, h_sched, w, scenario.adaptation,
                      scheduling_pdo, *deps.mcs_table);

  // Transmission on the true channel at the PUSCH amplitude.
  const double pusch_gain = std::sqrt(db_to_linear(pusch_density));
  std::vector<CMat> h_rx(scenario.n_rbg_pusch);
  std::vector<CMat> w_rx(scenario.n_rbg_pusch, w_common);
  for (int b = 0; b < scenario.n_rbg_pusch; ++b) {
    h_rx[b] = scale(true_pusch.per_rbg_h[b], cd(pusch_gain, 0.0));
  }
  const std::vector<double> mi_rx = deps.engine->mi_for_fixed_selection(
      h_rx, w_rx, decision.wb_ri, decision.wb_tpmi);

  const long n_re_per_rbg = static_cast<long>(scenario.grid.rbs_per_rbg) *
                            scenario.data_res_per_rb;
  const BlockErrorModel err_model(scenario.error_model);
  Rng err_rng(substream(scenario.seed, kTagError, si, di));

  DropRecord rec;
  rec.pdo_db = pdo_db;
  rec.wb_ri = decision.wb_ri;
  rec.wb_tpmi = decision.wb_tpmi;
  // The record describes the transmitted blocks only; the decision also
  // carries MCS for sounded-but-unscheduled RBGs.
  rec.mcs_per_rbg.assign(
      decision.mcs_per_rbg.begin(),
      decision.mcs_per_rbg.begin() + scenario.n_rbg_pusch);
  rec.received_mi_per_layer.resize(scenario.n_rbg_pusch);
  rec.success.resize(scenario.n_rbg_pusch);
  for (int b = 0; b < scenario.n_rbg_pusch; ++b) {
    const mcs::McsEntry& entry =
        deps.mcs_table->entries.at(decision.mcs_per_rbg[b]);
    const double mi_layer = mi_rx[b] / decision.wb_ri;
    rec.received_mi_per_layer[b] = mi_layer;
    const bool ok = err_model.draw(mi_layer, entry, err_rng);
    rec.success[b] = ok ? 1 : 0;
    if (ok) {
      rec.delivered_bits +=
          mcs::transport_block_bits(entry, n_re_per_rbg) * decision.wb_ri;
    }
  }
  return rec;
}

SimResult run_scenario(const Scenario& scenario, const SimDeps& deps) {
  if (scenario.snr_grid_db.empty() || scenario.drops < 1) {
    throw invalid_parameter("run_scenario: empty grid or no drops");
  }
  SimResult result;
  result.scenario_id = scenario.id;
  result.adaptation_on = scenario.adaptation_on;
  result.pdo_db = scenario.pdo_db;
  result.drops = scenario.drops;
  result.seed = scenario.seed;
  result.config_hash = scenario.config_hash;
  result.points.resize(scenario.snr_grid_db.size());

  int n_threads = scenario.threads;
  if (n_threads <= 0) {
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  n_threads = std::clamp(n_threads, 1, scenario.drops);

  for (std::size_t si = 0; si < scenario.snr_grid_db.size(); ++si) {
    const double snr_db = scenario.snr_grid_db[si];
    std::vector<DropRecord> records(scenario.drops);

    if (n_threads == 1) {
      for (int d = 0; d < scenario.drops; ++d) {
        records[d] =
            run_drop(scenario, deps, snr_db, static_cast<int>(si), d);
      }
    } else {
      std::atomic<int> next{0};
      std::exception_ptr first_error;
      std::mutex error_mutex;
      auto worker = [&]() {
        for (;;) {
          const int d = next.fetch_add(1);
          if (d >= scenario.drops) {
            return;
          }
          try {
            records[d] =
                run_drop(scenario, deps, snr_db, static_cast<int>(si), d);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) {
              first_error = std::current_exception();
            }
            return;
          }
        }
      };
      std::vector<std::thread> pool;
      pool.reserve(n_threads);
      for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back(worker);
      }
      for (std::thread& t : pool) {
        t.join();
      }
      if (first_error) {
        std::rethrow_exception(first_error);
      }
    }

    // Deterministic reduction in drop order.
    SnrPointResult& point = result.points[si];
    point.snr_db = snr_db;
    long bits = 0;
    long mcs_sum = 0;
    for (const DropRecord& rec : records) {
      bits += rec.delivered_bits;
      for (std::size_t b = 0; b < rec.success.size(); ++b) {
        ++point.blocks;
        if (rec.success[b] == 0) {
          ++point.block_errors;
        }
        mcs_sum += rec.mcs_per_rbg[b];
      }
    }
    point.bler = static_cast<double>(point.block_errors) / point.blocks;
    point.throughput_bits_per_slot =
        static_cast<double>(bits) / scenario.drops;
    point.mean_mcs = static_cast<double>(mcs_sum) / point.blocks;
  }
  return result;
}

double throughput_gain(const SimResult& on, const SimResult& off) {
  if (on.points.size() != off.points.size()) {
    throw invalid_parameter("throughput_gain: SNR grids differ");
  }
  double t_on = 0.0;
  double t_off = 0.0;
  for (std::size_t i = 0; i < on.points.size(); ++i) {
    if (on.points[i].snr_db != off.points[i].snr_db) {
      throw invalid_parameter("throughput_gain: SNR grids differ");
    }
    t_on += on.points[i].throughput_bits_per_slot;
    t_off += off.points[i].throughput_bits_per_slot;
  }
  t_on /= on.points.size();
  t_off /= off.points.size();
  if (t_off == 0.0) {
    return t_on > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return (t_on - t_off) / t_off;
}

}  // namespace pdolink::sim
