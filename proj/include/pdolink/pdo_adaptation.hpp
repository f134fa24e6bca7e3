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
#include <span>
#include <utility>
#include <vector>

#include "pdolink/csi_engine.hpp"
#include "pdolink/mcs_mapping.hpp"

namespace pdolink::adapt {

/// Configuration of the channel-scaling step. The scaling factor alpha
/// places the two virtual PDO reference points at +-20 log10(alpha) dB
/// around the 0 dB point of the unscaled estimate.
struct AdaptationConfig {
  double alpha_scale = 3.1622776601683795;  // sqrt(10): references at +-10 dB

  std::array<double, 3> reference_pdos_db() const {
    const double q = 20.0 * std::log10(alpha_scale);
    return {-q, 0.0, q};
  }
};

/// Ordered (PDO dB, per-RBG MI) points. MI values are bits per RE summed
/// over the selected layers.
struct MiCurve {
  struct Point {
    double pdo_db;
    std::vector<double> mi_per_rbg;
  };
  std::vector<Point> points;
};

/// Builds the MI-vs-PDO curve for one channel snapshot: the wideband
/// (RI, TPMI) and the 0 dB point come from a full search on the unscaled
/// estimate; the outer points evaluate the fixed selection on alpha-scaled
/// copies of the estimate.
std::pair<csi::CsiReport, MiCurve> build_mi_curve(
    const csi::CsiEngine& engine, std::span<const CMat> h_est_per_rbg,
    std::span<const CMat> w_per_rbg, const AdaptationConfig& cfg);

/// Piecewise-linear interpolation of the curve at the actual PDO, linearly
/// extrapolated from the nearest segment outside the reference span and
/// clamped to [0, mi_cap]. A single-point curve is constant in PDO; an
/// empty curve throws no_reference_error.
std::vector<double> adapted_mi(const MiCurve& curve, double actual_pdo_db,
                               double mi_cap);

/// Scheduling decision for one snapshot: wideband selection plus per-RBG
/// MCS chosen from the PDO-adapted MI.
struct ScheduleDecision {
  int wb_ri = 0;
  int wb_tpmi = 0;
  std::vector<double> adapted_mi_per_rbg;
  std::vector<int> mcs_per_rbg;
};

/// Full Algorithm 2 composition: build_mi_curve, adapted_mi at the actual
/// PDO, then the MI-to-MCS lookup per RBG on the per-layer MI.
ScheduleDecision schedule(const csi::CsiEngine& engine,
                          std::span<const CMat> h_est_per_rbg,
                          std::span<const CMat> w_per_rbg,
                          const AdaptationConfig& cfg, double actual_pdo_db,
                          const mcs::McsTable& table);

}  // namespace pdolink::adapt
