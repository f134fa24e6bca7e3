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

#include <string>
#include <vector>

#include "pdolink/link_simulator.hpp"

namespace pdolink::io {

/// Writes one CSV per scenario id. Columns:
/// scenario_id,pdo_db,adaptation,snr_db,bler,throughput_bits_per_slot,
/// mean_mcs,drops,seed
/// Formatting is locale-independent and deterministic, so identical runs
/// produce byte-identical files.
void write_results_csv(const std::string& path,
                       const std::vector<sim::SimResult>& results);

/// Run manifest: written after the result files as the validity marker.
void write_manifest(const std::string& path, const std::string& scenario_id,
                    const std::string& resolved_config_json,
                    const std::vector<std::string>& outputs,
                    std::uint64_t seed, double duration_seconds);

/// One curve set parsed back from a results CSV.
struct CsvCurve {
  std::string scenario_id;
  double pdo_db = 0.0;
  bool adaptation_on = true;
  std::vector<double> snr_db;
  std::vector<double> throughput;
};

std::vector<CsvCurve> read_results_csv(const std::string& path);

struct GainRow {
  std::string scenario_id;
  double pdo_db = 0.0;
  double mean_throughput_on = 0.0;
  double mean_throughput_off = 0.0;
  double gain = 0.0;
};

/// Pairs ON/OFF curves per scenario id across the given CSV files and
/// computes the average throughput gain. Scenario ids present with only one
/// adaptation mode are reported in `unpaired`.
std::vector<GainRow> compute_gains(const std::vector<std::string>& csv_paths,
                                   std::vector<std::string>& unpaired);

/// Renders a gain as a ratio string; infinity prints as "inf".
std::string format_gain(double gain);

void write_gains_csv(const std::string& path,
                     const std::vector<GainRow>& rows);

}  // namespace pdolink::io
