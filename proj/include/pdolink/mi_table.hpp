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
#include <string>
#include <vector>

#include "pdolink/common.hpp"

namespace pdolink::csi {

enum class Modulation { qpsk = 0, qam16 = 1, qam64 = 2, qam256 = 3 };

constexpr int kNumModulations = 4;

/// Bits per symbol (Q_m) for a modulation.
int modulation_order(Modulation m);

Modulation modulation_from_qm(int qm);

const char* modulation_name(Modulation m);

/// Coded-modulation (constrained-capacity) mutual information of square QAM
/// over a complex AWGN channel, tabulated on a uniform SNR grid in dB and
/// linearly interpolated. Below the grid the MI is extended linearly in
/// linear SNR through the origin; above the grid it saturates at the last
/// table value.
class MiTableSet {
 public:
  MiTableSet() = default;

  /// Parses the versioned text format produced by save().
  static MiTableSet load(const std::string& path);

  void save(const std::string& path) const;

  /// Computes the tables by Gauss-Hermite quadrature of the per-dimension
  /// PAM integral (a square QAM constellation is two independent PAM
  /// constellations at the per-dimension SNR).
  static MiTableSet generate(double snr_db_min = -20.0,
                             double snr_db_step = 0.1, int n_points = 601,
                             int quad_nodes = 128);

  /// MI in bits per RE for one layer at a linear SINR.
  double value(Modulation m, double sinr_linear) const;

  /// MI at an SNR given in dB.
  double value_db(Modulation m, double sinr_db) const;

  double snr_db_min() const { return snr_db_min_; }
  double snr_db_step() const { return snr_db_step_; }
  int n_points() const { return n_points_; }
  const std::vector<double>& table(Modulation m) const {
    return tables_[static_cast<int>(m)];
  }

  bool loaded() const { return n_points_ > 0; }

 private:
  double snr_db_min_ = 0.0;
  double snr_db_step_ = 0.0;
  int n_points_ = 0;
  std::array<std::vector<double>, kNumModulations> tables_;
};

/// Constrained-capacity MI of unit-energy M-PAM in real AWGN at the given
/// per-dimension SNR, by Gauss-Hermite quadrature with quad_nodes nodes.
/// Exposed for table generation and oracle cross-checks.
double pam_mutual_information(int m_pam, double snr_linear, int quad_nodes);

/// Gauss-Hermite nodes and weights for weight exp(-t^2) on n nodes
/// (Newton iteration on the recurrence). sum(w) = sqrt(pi).
void gauss_hermite(int n, std::vector<double>& nodes,
                   std::vector<double>& weights);

}  // namespace pdolink::csi
