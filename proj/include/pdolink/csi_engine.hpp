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
#include <string>
#include <utility>
#include <vector>

#include "pdolink/linalg.hpp"
#include "pdolink/mi_table.hpp"

namespace pdolink::csi {

/// Uplink precoding codebook for a fixed antenna port count. Entries are
/// indexed by rank r in [1, max_rank] and TPMI p in [0, n_tpmi(r)-1].
class Codebook {
 public:
  Codebook(int n_tx, std::vector<std::vector<CMat>> entries);

  /// Loads the codebook for n_tx ports from the versioned JSON data file.
  static Codebook load(const std::string& path, int n_tx);

  int n_tx() const { return n_tx_; }
  int max_rank() const { return static_cast<int>(entries_.size()); }
  int n_tpmi(int rank) const;
  const CMat& precoder(int rank, int tpmi) const;

 private:
  int n_tx_;
  std::vector<std::vector<CMat>> entries_;
};

/// Dense MI table over (rank, tpmi, rbg, modulation), filled by
/// run_algorithm1. Values are bits per RE summed over layers.
class MiDictionary {
 public:
  MiDictionary(const Codebook& cb, int n_rbg);

  double at(int rank, int tpmi, int rbg, Modulation m) const;
  double& at(int rank, int tpmi, int rbg, Modulation m);

  int n_rbg() const { return n_rbg_; }
  int max_rank() const { return static_cast<int>(tpmi_count_.size()); }
  int n_tpmi(int rank) const { return tpmi_count_[rank - 1]; }

 private:
  std::size_t index(int rank, int tpmi, int rbg, Modulation m) const;

  int n_rbg_;
  std::vector<int> tpmi_count_;
  std::vector<std::size_t> rank_offset_;
  std::vector<double> values_;
};

/// Wideband selection plus the per-RBG MI at that selection.
struct CsiReport {
  int wb_ri = 0;
  int wb_tpmi = 0;
  std::vector<double> mi_per_rbg;
};

/// H_tilde = w * h_est * p. Throws invalid_parameter on dimension mismatch
/// or non-finite input.
CMat effective_channel(const CMat& w, const CMat& h_est, const CMat& p);

/// Per-layer post-MMSE SINR (linear): 1 / [(I + H^H H)^{-1}]_ll - 1.
std::vector<double> layer_sinr(const CMat& h_tilde);

/// Unconstrained capacity sum_l log2(1 + sinr_l) in bits per RE.
double capacity(std::span<const double> sinr);

/// Codebook search engine. Holds the immutable lookup structures plus an
/// optional per-modulation SINR penalty (dB) applied before the table
/// lookup; the penalty defaults to zero, which makes the per-cell max over
/// modulations land on the highest order by the capacity ordering.
class CsiEngine {
 public:
  CsiEngine(const Codebook& codebook, const MiTableSet& tables)
      : codebook_(codebook), tables_(tables) {}

  void set_modulation_penalty_db(const std::array<double, kNumModulations>& p) {
    penalty_db_ = p;
  }

  const Codebook& codebook() const { return codebook_; }
  const MiTableSet& tables() const { return tables_; }

  /// sum_l I_m(sinr_l) in bits per RE.
  double modulation_mi(std::span<const double> sinr, Modulation m) const;

  /// Full search over (rank, tpmi): fills the MI dictionary, reduces over
  /// modulations and RBGs, and picks the wideband argmax with ties broken
  /// toward the lowest rank, then the lowest TPMI.
  std::pair<CsiReport, MiDictionary> run_algorithm1(
      std::span<const CMat> h_est_per_rbg,
      std::span<const CMat> w_per_rbg) const;

  /// Per-RBG MI at one fixed (rank, tpmi) pair, no search. Matches
  /// run_algorithm1's mi_per_rbg when the pair is that run's argmax.
  std::vector<double> mi_for_fixed_selection(std::span<const CMat> h_est_per_rbg,
                                             std::span<const CMat> w_per_rbg,
                                             int rank, int tpmi) const;

 private:
  double cell_mi(const CMat& h_tilde, Modulation m) const;

  const Codebook& codebook_;
  const MiTableSet& tables_;
  std::array<double, kNumModulations> penalty_db_{0.0, 0.0, 0.0, 0.0};
};

}  // namespace pdolink::csi
