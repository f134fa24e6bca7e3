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

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "pdolink/csi_engine.hpp"

namespace pdolink::csi {

Codebook::Codebook(int n_tx, std::vector<std::vector<CMat>> entries)
    : n_tx_(n_tx), entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw invalid_parameter("Codebook: no entries");
  }
  for (std::size_t r = 0; r < entries_.size(); ++r) {
    if (entries_[r].empty()) {
      throw invalid_parameter("Codebook: empty rank slot");
    }
    for (const CMat& p : entries_[r]) {
      if (p.rows() != n_tx_ || p.cols() != static_cast<int>(r + 1)) {
        throw invalid_parameter("Codebook: entry dimensions inconsistent");
      }
    }
  }
}

int Codebook::n_tpmi(int rank) const {
  if (rank < 1 || rank > max_rank()) {
    throw invalid_parameter("Codebook::n_tpmi: rank out of range");
  }
  return static_cast<int>(entries_[rank - 1].size());
}

const CMat& Codebook::precoder(int rank, int tpmi) const {
  if (rank < 1 || rank > max_rank()) {
    throw invalid_parameter("Codebook::precoder: rank out of range");
  }
  const std::vector<CMat>& slot = entries_[rank - 1];
  if (tpmi < 0 || tpmi >= static_cast<int>(slot.size())) {
    throw invalid_parameter("Codebook::precoder: tpmi out of range");
  }
  return slot[tpmi];
}

namespace {

double parse_scale(const std::string& s) {
  if (s == "1") return 1.0;
  if (s == "1/2") return 0.5;
  if (s == "1/sqrt2") return 1.0 / std::sqrt(2.0);
  if (s == "1/(2sqrt2)") return 1.0 / (2.0 * std::sqrt(2.0));
  if (s == "1/(2sqrt3)") return 1.0 / (2.0 * std::sqrt(3.0));
  if (s == "1/4") return 0.25;
  throw std::runtime_error("Codebook: unknown scale token '" + s + "'");
}

}  // namespace

Codebook Codebook::load(const std::string& path, int n_tx) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("Codebook::load: cannot open " + path);
  }
  nlohmann::json doc;
  in >> doc;
  const std::string key = std::to_string(n_tx);
  if (!doc.contains("codebooks") || !doc["codebooks"].contains(key)) {
    throw std::runtime_error("Codebook::load: no codebook for " + key +
                             " ports in " + path);
  }
  const nlohmann::json& cb = doc["codebooks"][key];
  std::vector<std::vector<CMat>> entries;
  for (int rank = 1; cb.contains(std::to_string(rank)); ++rank) {
    const nlohmann::json& slot = cb[std::to_string(rank)];
    std::vector<CMat> mats;
    mats.reserve(slot.size());
    for (const nlohmann::json& e : slot) {
      const double scale = parse_scale(e.at("scale").get<std::string>());
      const nlohmann::json& rows = e.at("m");
      CMat m(static_cast<int>(rows.size()),
             static_cast<int>(rows[0].size()));
      for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
          const nlohmann::json& cell = rows[i][j];
          m(i, j) = scale * cd(cell[0].get<double>(), cell[1].get<double>());
        }
      }
      mats.push_back(m);
    }
    entries.push_back(std::move(mats));
  }
  return Codebook(n_tx, std::move(entries));
}

MiDictionary::MiDictionary(const Codebook& cb, int n_rbg) : n_rbg_(n_rbg) {
  if (n_rbg < 1) {
    throw invalid_parameter("MiDictionary: n_rbg must be >= 1");
  }
  tpmi_count_.resize(cb.max_rank());
  rank_offset_.resize(cb.max_rank());
  std::size_t total = 0;
  for (int r = 1; r <= cb.max_rank(); ++r) {
    tpmi_count_[r - 1] = cb.n_tpmi(r);
    rank_offset_[r - 1] = total;
    total += static_cast<std::size_t>(tpmi_count_[r - 1]) * n_rbg_ *
             kNumModulations;
  }
  values_.assign(total, 0.0);
}

std::size_t MiDictionary::index(int rank, int tpmi, int rbg,
                                Modulation m) const {
  return rank_offset_[rank - 1] +
         ((static_cast<std::size_t>(tpmi) * n_rbg_ + rbg) * kNumModulations +
          static_cast<std::size_t>(m));
}

double MiDictionary::at(int rank, int tpmi, int rbg, Modulation m) const {
  return values_[index(rank, tpmi, rbg, m)];
}

double& MiDictionary::at(int rank, int tpmi, int rbg, Modulation m) {
  return values_[index(rank, tpmi, rbg, m)];
}

CMat effective_channel(const CMat& w, const CMat& h_est, const CMat& p) {
  if (w.cols() != h_est.rows() || h_est.cols() != p.rows()) {
    throw invalid_parameter("effective_channel: dimension mismatch");
  }
  if (!w.finite() || !h_est.finite() || !p.finite()) {
    throw invalid_parameter("effective_channel: non-finite input");
  }
  return multiply(multiply(w, h_est), p);
}

std::vector<double> layer_sinr(const CMat& h_tilde) {
  if (!h_tilde.finite()) {
    throw invalid_parameter("layer_sinr: non-finite input");
  }
  const int r = h_tilde.cols();
  CMat a = gram(h_tilde);
  for (int i = 0; i < r; ++i) {
    a(i, i) += 1.0;
  }
  const std::vector<double> diag = hermitian_inverse_diagonal(a);
  std::vector<double> sinr(r);
  for (int i = 0; i < r; ++i) {
    sinr[i] = std::max(0.0, 1.0 / diag[i] - 1.0);
  }
  return sinr;
}

double capacity(std::span<const double> sinr) {
  double c = 0.0;
  for (double s : sinr) {
    if (s < 0.0) {
      throw invalid_parameter("capacity: negative SINR");
    }
    c += std::log2(1.0 + s);
  }
  return c;
}

double CsiEngine::modulation_mi(std::span<const double> sinr,
                                Modulation m) const {
  const double pen = db_to_linear(-penalty_db_[static_cast<int>(m)]);
  double acc = 0.0;
  for (double s : sinr) {
    if (s < 0.0) {
      throw invalid_parameter("modulation_mi: negative SINR");
    }
    acc += tables_.value(m, s * pen);
  }
  return acc;
}

double CsiEngine::cell_mi(const CMat& h_tilde, Modulation m) const {
  const std::vector<double> sinr = layer_sinr(h_tilde);
  return modulation_mi(sinr, m);
}

std::pair<CsiReport, MiDictionary> CsiEngine::run_algorithm1(
    std::span<const CMat> h_est_per_rbg, std::span<const CMat> w_per_rbg) const {
  const int n_rbg = static_cast<int>(h_est_per_rbg.size());
  if (n_rbg < 1 || w_per_rbg.size() != h_est_per_rbg.size()) {
    throw invalid_parameter("run_algorithm1: need one W per RBG");
  }

  // W(b) * H_est(b) is shared by every (rank, tpmi) candidate.
  std::vector<CMat> wh(n_rbg);
  for (int b = 0; b < n_rbg; ++b) {
    if (!h_est_per_rbg[b].finite() || !w_per_rbg[b].finite()) {
      throw invalid_parameter("run_algorithm1: non-finite input");
    }
    wh[b] = multiply(w_per_rbg[b], h_est_per_rbg[b]);
  }
  const int n_rx = wh[0].rows();
  const int max_rank = std::min(codebook_.max_rank(), n_rx);

  MiDictionary dict(codebook_, n_rbg);
  CsiReport report;
  double best = -1.0;
  std::vector<double> best_per_rbg(n_rbg);
  std::vector<double> cur_per_rbg(n_rbg);

  for (int r = 1; r <= max_rank; ++r) {
    for (int p = 0; p < codebook_.n_tpmi(r); ++p) {
      const CMat& prec = codebook_.precoder(r, p);
      double mean_mi = 0.0;
      for (int b = 0; b < n_rbg; ++b) {
        const CMat h_tilde = multiply(wh[b], prec);
        const std::vector<double> sinr = layer_sinr(h_tilde);
        double cell_best = 0.0;
        for (int mi = 0; mi < kNumModulations; ++mi) {
          const auto m = static_cast<Modulation>(mi);
          const double v = modulation_mi(sinr, m);
          dict.at(r, p, b, m) = v;
          cell_best = std::max(cell_best, v);
        }
        cur_per_rbg[b] = cell_best;
        mean_mi += cell_best;
      }
      mean_mi /= n_rbg;
      if (mean_mi > best) {
        best = mean_mi;
        report.wb_ri = r;
        report.wb_tpmi = p;
        best_per_rbg = cur_per_rbg;
      }
    }
  }
  report.mi_per_rbg = std::move(best_per_rbg);
  return {std::move(report), std::move(dict)};
}

std::vector<double> CsiEngine::mi_for_fixed_selection(
    std::span<const CMat> h_est_per_rbg, std::span<const CMat> w_per_rbg,
    int rank, int tpmi) const {
  const int n_rbg = static_cast<int>(h_est_per_rbg.size());
  if (n_rbg < 1 || w_per_rbg.size() != h_est_per_rbg.size()) {
    throw invalid_parameter("mi_for_fixed_selection: need one W per RBG");
  }
  const CMat& prec = codebook_.precoder(rank, tpmi);
  std::vector<double> mi(n_rbg);
  for (int b = 0; b < n_rbg; ++b) {
    const CMat h_tilde =
        effective_channel(w_per_rbg[b], h_est_per_rbg[b], prec);
    const std::vector<double> sinr = layer_sinr(h_tilde);
    double cell_best = 0.0;
    for (int m = 0; m < kNumModulations; ++m) {
      cell_best =
          std::max(cell_best, modulation_mi(sinr, static_cast<Modulation>(m)));
    }
    mi[b] = cell_best;
  }
  return mi;
}

}  // namespace pdolink::csi
