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

#include "pdolink/pdo_adaptation.hpp"

namespace pdolink::adapt {

std::pair<csi::CsiReport, MiCurve> build_mi_curve(
    const csi::CsiEngine& engine, std::span<const CMat> h_est_per_rbg,
    std::span<const CMat> w_per_rbg, const AdaptationConfig& cfg) {
  if (!(cfg.alpha_scale >= 1.0) || !std::isfinite(cfg.alpha_scale)) {
    throw invalid_parameter("build_mi_curve: alpha_scale must be >= 1");
  }
  auto [report, dict] = engine.run_algorithm1(h_est_per_rbg, w_per_rbg);
  (void)dict;

  const std::array<double, 3> refs = cfg.reference_pdos_db();
  const int n_rbg = static_cast<int>(h_est_per_rbg.size());

  auto scaled_mi = [&](double factor) {
    std::vector<CMat> scaled(n_rbg);
    for (int b = 0; b < n_rbg; ++b) {
      scaled[b] = scale(h_est_per_rbg[b], cd(factor, 0.0));
    }
    return engine.mi_for_fixed_selection(scaled, w_per_rbg, report.wb_ri,
                                         report.wb_tpmi);
  };

  MiCurve curve;
  curve.points.push_back({refs[0], scaled_mi(1.0 / cfg.alpha_scale)});
  curve.points.push_back({refs[1], report.mi_per_rbg});
  curve.points.push_back({refs[2], scaled_mi(cfg.alpha_scale)});
  // A degenerate alpha of 1 collapses the references onto one point; keep
  // the curve strictly increasing in PDO.
  if (cfg.alpha_scale == 1.0) {
    curve.points.erase(curve.points.begin() + 2);
    curve.points.erase(curve.points.begin());
  }
  return {std::move(report), std::move(curve)};
}

std::vector<double> adapted_mi(const MiCurve& curve, double actual_pdo_db,
                               double mi_cap) {
  const std::size_t n = curve.points.size();
  if (n == 0) {
    throw no_reference_error("adapted_mi: empty curve");
  }
  if (!std::isfinite(actual_pdo_db)) {
    throw invalid_parameter("adapted_mi: PDO must be finite");
  }
  const std::size_t n_rbg = curve.points.front().mi_per_rbg.size();
  for (std::size_t k = 1; k < n; ++k) {
    if (!(curve.points[k].pdo_db > curve.points[k - 1].pdo_db)) {
      throw invalid_parameter("adapted_mi: curve PDOs not strictly increasing");
    }
    if (curve.points[k].mi_per_rbg.size() != n_rbg) {
      throw invalid_parameter("adapted_mi: inconsistent RBG count in curve");
    }
  }
  if (n == 1) {
    // Single-point curve: constant in PDO (alpha = 1 degenerate case).
    std::vector<double> mi = curve.points.front().mi_per_rbg;
    for (double& v : mi) {
      v = std::clamp(v, 0.0, mi_cap);
    }
    return mi;
  }

  // Segment selection: interior segments by binary predicate, nearest
  // segment outside the span (linear extrapolation).
  std::size_t hi = 1;
  while (hi + 1 < n && curve.points[hi].pdo_db < actual_pdo_db) {
    ++hi;
  }
  const MiCurve::Point& a = curve.points[hi - 1];
  const MiCurve::Point& b = curve.points[hi];
  const double t = (actual_pdo_db - a.pdo_db) / (b.pdo_db - a.pdo_db);

  std::vector<double> mi(n_rbg);
  for (std::size_t i = 0; i < n_rbg; ++i) {
    // (1-t)*y0 + t*y1 reproduces the knots exactly at t = 0 and t = 1.
    const double v = (1.0 - t) * a.mi_per_rbg[i] + t * b.mi_per_rbg[i];
    mi[i] = std::clamp(v, 0.0, mi_cap);
  }
  return mi;
}

ScheduleDecision schedule(const csi::CsiEngine& engine,
                          std::span<const CMat> h_est_per_rbg,
                          std::span<const CMat> w_per_rbg,
                          const AdaptationConfig& cfg, double actual_pdo_db,
                          const mcs::McsTable& table) {
  auto [report, curve] = build_mi_curve(engine, h_est_per_rbg, w_per_rbg, cfg);
  const double mi_cap = static_cast<double>(report.wb_ri) *
                        modulation_order(csi::Modulation::qam256);
  ScheduleDecision decision;
  decision.wb_ri = report.wb_ri;
  decision.wb_tpmi = report.wb_tpmi;
  decision.adapted_mi_per_rbg = adapted_mi(curve, actual_pdo_db, mi_cap);
  decision.mcs_per_rbg.reserve(decision.adapted_mi_per_rbg.size());
  for (double mi : decision.adapted_mi_per_rbg) {
    // The MI2MCS table is per layer; the curve carries the layer sum.
    decision.mcs_per_rbg.push_back(
        mcs::mi_to_mcs(mi / report.wb_ri, table));
  }
  return decision;
}

}  // namespace pdolink::adapt
