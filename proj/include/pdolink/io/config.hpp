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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pdolink/link_simulator.hpp"

namespace pdolink::io {

struct CalibrationSpec {
  double target_bler = 0.10;
  double tolerance = 0.005;
  int drops = 50000;
  std::uint64_t seed = 7;
};

/// A parsed and validated run configuration. scenarios is expanded over the
/// requested adaptation modes (one Scenario per mode).
struct RunConfig {
  std::vector<sim::Scenario> scenarios;
  CalibrationSpec calibration;
  std::array<double, csi::kNumModulations> modulation_penalty_db{0, 0, 0, 0};
  std::string output_dir;
  std::string calibrated_table_path;
  /// Canonical JSON dump of the resolved configuration.
  std::string resolved_json;
};

/// Directory holding the versioned data files (channel profiles, codebook,
/// MI tables, MCS index table). Resolution order: PDOLINK_DATA_DIR
/// environment variable, then the build-time default.
std::string data_dir();

std::string profiles_path();
std::string codebook_path();
std::string mi_tables_path();
std::string mcs_index_table_path();

/// Parses a JSON config file. Unknown keys, out-of-range values, or missing
/// required fields throw config_error naming the offending field. Scenario
/// presets: "setting1" (4x4, EPA 5 Hz, comb 4), "setting2" (2x2, EVA 20 Hz,
/// comb 2), each with a "_full" variant at the 68-RBG sounding bandwidth.
RunConfig load_config(const std::string& path);

/// Same parser over an in-memory JSON string (used by tests and presets).
RunConfig parse_config(const std::string& json_text);

/// Minimal config text for a named preset at one PDO, e.g.
/// preset_config_json("setting1", 3.0). Desk-scale defaults.
std::string preset_config_json(const std::string& preset, double pdo_db);

}  // namespace pdolink::io
