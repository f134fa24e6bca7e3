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
#include <functional>
#include <string>
#include <vector>

#include "pdolink/common.hpp"

namespace pdolink::mcs {

/// One MCS table row. mi_threshold is in per-layer bits per RE and is NaN
/// until calibrated.
struct McsEntry {
  int index = 0;
  int q_m = 2;
  double code_rate = 0.0;
  double spectral_efficiency = 0.0;
  double mi_threshold = std::numeric_limits<double>::quiet_NaN();
};

struct McsTable {
  std::vector<McsEntry> entries;

  bool calibrated() const;
};

/// Loads the base MCS index table (uncalibrated thresholds) from its
/// versioned data file.
McsTable load_mcs_index_table(const std::string& path);

/// Loads a calibrated table written by save_calibrated_table.
McsTable load_calibrated_table(const std::string& path);

/// Persists a calibrated table as plain text, one entry per line.
void save_calibrated_table(const McsTable& table, const std::string& path,
                           const std::string& header_note);

/// Highest index whose threshold is <= mi (inclusive); index 0 when mi is
/// below every threshold. Throws on an empty or uncalibrated table.
int mi_to_mcs(double mi, const McsTable& table);

/// Block error oracle: given the received per-layer MI and an MCS entry,
/// draws one block and returns true on decode success.
using BlockErrorOracle =
    std::function<bool(double received_mi, const McsEntry& entry, Rng& rng)>;

struct CalibrationResult {
  std::vector<double> thresholds;
  std::vector<double> achieved_bler;
  std::vector<int> iterations;
  int drops = 0;
  bool converged = false;
};

/// Per-MCS bisection for the MI threshold whose simulated BLER lands within
/// [target - tol, target + tol], followed by an isotonic pass enforcing
/// nondecreasing thresholds. Writes the thresholds into the table. Throws
/// calibration_error when any index fails to converge within max_iter.
CalibrationResult calibrate(McsTable& table, const BlockErrorOracle& oracle,
                            double target_bler, double tol, int drops,
                            std::uint64_t seed, int max_iter = 64);

/// floor(spectral_efficiency * n_re) bits carried by one layer of a block
/// spanning n_re resource elements.
long transport_block_bits(const McsEntry& entry, long n_re);

}  // namespace pdolink::mcs
