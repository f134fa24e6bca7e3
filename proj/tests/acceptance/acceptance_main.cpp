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

/// Release gate: ten numbered acceptance criteria, one PASS/FAIL line each,
/// nonzero exit when any criterion fails. The Monte-Carlo criteria share a
/// cache of desk-scale scenario runs (8 RBGs, 500 drops per SNR point,
/// 7-point SNR grid, 4x4 EPA at 5 Hz, comb-4 SRS).

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pdolink/io/config.hpp"
#include "pdolink/io/results.hpp"
#include "pdolink/link_simulator.hpp"
#include "pdolink/pdo_adaptation.hpp"

namespace {

using namespace pdolink;
using Clock = std::chrono::steady_clock;

std::string strf(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

CMat random_channel(Rng& rng, int rows, int cols) {
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = cd(rng.gauss(), rng.gauss()) / std::sqrt(2.0);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Straight-line reimplementation of the codebook search, kept deliberately
// naive (triple-loop products, Gauss-Jordan inversion) and independent of
// the library's linear algebra.

CMat naive_mul(const CMat& a, const CMat& b) {
  CMat out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      cd acc(0.0, 0.0);
      for (int k = 0; k < a.cols(); ++k) {
        acc += a(i, k) * b(k, j);
      }
      out(i, j) = acc;
    }
  }
  return out;
}

std::vector<double> naive_sinr(const CMat& ht) {
  const int n = ht.cols();
  // a = I + ht^H ht, then invert by Gauss-Jordan with partial pivoting.
  std::vector<std::vector<cd>> a(n, std::vector<cd>(2 * n, cd(0.0, 0.0)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cd acc = i == j ? cd(1.0, 0.0) : cd(0.0, 0.0);
      for (int k = 0; k < ht.rows(); ++k) {
        acc += std::conj(ht(k, i)) * ht(k, j);
      }
      a[i][j] = acc;
    }
    a[i][n + i] = cd(1.0, 0.0);
  }
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) {
        pivot = r;
      }
    }
    std::swap(a[col], a[pivot]);
    const cd inv_p = cd(1.0, 0.0) / a[col][col];
    for (int j = 0; j < 2 * n; ++j) {
      a[col][j] *= inv_p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) {
        continue;
      }
      const cd f = a[r][col];
      for (int j = 0; j < 2 * n; ++j) {
        a[r][j] -= f * a[col][j];
      }
    }
  }
  std::vector<double> sinr(n);
  for (int l = 0; l < n; ++l) {
    sinr[l] = std::max(0.0, 1.0 / a[l][n + l].real() - 1.0);
  }
  return sinr;
}

struct OracleResult {
  int wb_ri = 0;
  int wb_tpmi = 0;
  std::vector<double> mi_per_rbg;
  double max_cell_diff = 0.0;
};

/// Walks the full (rank, tpmi, rbg, modulation) grid, comparing every cell
/// against the library dictionary and reproducing the argmax reduction.
OracleResult oracle_search(const csi::Codebook& cb,
                           const csi::MiTableSet& tables,
                           const std::vector<CMat>& h,
                           const std::vector<CMat>& w,
                           const csi::MiDictionary& dict) {
  static const csi::Modulation kMods[] = {
      csi::Modulation::qpsk, csi::Modulation::qam16, csi::Modulation::qam64,
      csi::Modulation::qam256};
  const int n_rbg = static_cast<int>(h.size());
  const int n_rx = h[0].rows();
  const int max_rank = std::min(cb.max_rank(), n_rx);

  OracleResult out;
  double best_mean = -1.0;
  for (int r = 1; r <= max_rank; ++r) {
    for (int p = 0; p < cb.n_tpmi(r); ++p) {
      std::vector<double> mi_rbg(n_rbg, 0.0);
      double mean = 0.0;
      for (int b = 0; b < n_rbg; ++b) {
        const CMat ht = naive_mul(w[b], naive_mul(h[b], cb.precoder(r, p)));
        const std::vector<double> sinr = naive_sinr(ht);
        double cell = 0.0;
        for (const csi::Modulation m : kMods) {
          double mi = 0.0;
          for (const double s : sinr) {
            mi += tables.value(m, s);
          }
          out.max_cell_diff = std::max(
              out.max_cell_diff, std::abs(mi - dict.at(r, p, b, m)));
          cell = std::max(cell, mi);
        }
        mi_rbg[b] = cell;
        mean += cell;
      }
      mean /= n_rbg;
      if (mean > best_mean) {
        best_mean = mean;
        out.wb_ri = r;
        out.wb_tpmi = p;
        out.mi_per_rbg = mi_rbg;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shared engines, tables and scenario-run cache.

struct Suite {
  csi::Codebook cb2 = csi::Codebook::load(io::codebook_path(), 2);
  csi::Codebook cb4 = csi::Codebook::load(io::codebook_path(), 4);
  csi::MiTableSet tables = csi::MiTableSet::load(io::mi_tables_path());
  csi::CsiEngine engine2{cb2, tables};
  csi::CsiEngine engine4{cb4, tables};

  /// MI2MCS thresholds. Bootstrapped from the logistic model's closed form
  /// (midpoint + slope * ln 9 hits 10% exactly); criterion 5 replaces them
  /// with the Monte-Carlo calibration when it converges.
  mcs::McsTable table = closed_form_table();

  std::map<std::tuple<double, bool, double>, sim::SimResult> cache;

  static mcs::McsTable closed_form_table() {
    mcs::McsTable t = mcs::load_mcs_index_table(io::mcs_index_table_path());
    const sim::BlockErrorModel model{sim::ErrorModelParams{}};
    for (mcs::McsEntry& e : t.entries) {
      e.mi_threshold = model.midpoint(e) + model.slope(e) * std::log(9.0);
    }
    return t;
  }

  sim::Scenario make_scenario(double pdo_db, bool on, double alpha) const {
    const std::string text = strf(
        "{\"scenario\": {\"preset\": \"setting1\", \"pdo_db\": %.17g, "
        "\"adaptation\": \"%s\"}, "
        "\"adaptation\": {\"alpha_scale\": %.17g}}",
        pdo_db, on ? "on" : "off", alpha);
    return io::parse_config(text).scenarios.front();
  }

  const sim::SimResult& run(double pdo_db, bool on, double alpha) {
    const auto key = std::make_tuple(pdo_db, on, alpha);
    const auto it = cache.find(key);
    if (it != cache.end()) {
      return it->second;
    }
    const sim::Scenario sc = make_scenario(pdo_db, on, alpha);
    const sim::SimDeps deps{&engine4, &table};
    return cache.emplace(key, sim::run_scenario(sc, deps)).first->second;
  }
};

const double kAlphaDefault = std::sqrt(10.0);

double max_bler(const sim::SimResult& r) {
  double m = 0.0;
  for (const sim::SnrPointResult& p : r.points) {
    m = std::max(m, p.bler);
  }
  return m;
}

double mean_bler(const sim::SimResult& r) {
  double m = 0.0;
  for (const sim::SnrPointResult& p : r.points) {
    m += p.bler;
  }
  return m / r.points.size();
}

double mean_tput(const sim::SimResult& r) {
  double m = 0.0;
  for (const sim::SnrPointResult& p : r.points) {
    m += p.throughput_bits_per_slot;
  }
  return m / r.points.size();
}

using Outcome = std::pair<bool, std::string>;

// ---------------------------------------------------------------------------
// Criterion 1: power math against inline closed-form evaluation.

Outcome criterion1() {
  power::PowerParams params;
  power::DynamicPowerState state;
  params.p_o_dbm = -80.0;
  params.mu = 1;
  params.alpha_pc = 0.8;
  state.pathloss_db = 100.0;

  double worst = 0.0;
  auto track = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
  };

  // Uncapped and capped transmit power over 100 RBs at mu = 1.
  const double uncapped =
      params.p_o_dbm + 10.0 * std::log10(2.0 * 100.0) +
      params.alpha_pc * state.pathloss_db;
  params.p_cmax_dbm = 30.0;
  track(power::tx_power(params, state, 100), uncapped);
  params.p_cmax_dbm = 23.0;
  track(power::tx_power(params, state, 100), 23.0);

  // Densities of a 272-RB comb-4 sounding and an 8-RB data allocation.
  power::TxRecord srs;
  srs.kind = power::TxKind::srs;
  srs.tx_power_dbm = 23.0;
  srs.n_rb = 272;
  srs.n_re_per_rb = 3;
  power::TxRecord pusch;
  pusch.kind = power::TxKind::pusch;
  pusch.tx_power_dbm = 23.0;
  pusch.n_rb = 8;
  pusch.n_re_per_rb = 12;
  track(power::power_density(srs), 23.0 - 10.0 * std::log10(272.0 * 3.0));
  track(power::power_density(pusch), 23.0 - 10.0 * std::log10(8.0 * 12.0));
  track(power::compute_pdo(pusch, srs), 10.0 * std::log10(816.0 / 96.0));

  return {worst < 1e-9, strf("power math vs closed form, max |err| %.2e dB",
                             worst)};
}

// ---------------------------------------------------------------------------
// Criterion 2: codebook search equals the naive reimplementation.

Outcome criterion2(Suite& s) {
  Rng rng(2026);
  double worst_cell = 0.0;
  double worst_mi = 0.0;
  int checked = 0;
  struct Case {
    const csi::CsiEngine* engine;
    const csi::Codebook* cb;
    int n_tx;
    int n_rx;
  };
  const Case cases[] = {{&s.engine2, &s.cb2, 2, 2}, {&s.engine4, &s.cb4, 4, 4}};
  for (const Case& c : cases) {
    for (int trial = 0; trial < 60; ++trial) {
      const int n_rbg = 1 + static_cast<int>(rng.raw() % 4);
      std::vector<CMat> h;
      std::vector<CMat> w;
      for (int b = 0; b < n_rbg; ++b) {
        h.push_back(random_channel(rng, c.n_rx, c.n_tx));
        w.push_back(CMat::identity(c.n_rx));
      }
      const auto [report, dict] = c.engine->run_algorithm1(h, w);
      const OracleResult oracle =
          oracle_search(*c.cb, s.tables, h, w, dict);
      if (report.wb_ri != oracle.wb_ri || report.wb_tpmi != oracle.wb_tpmi) {
        return {false, strf("argmax mismatch on %dx%d trial %d: got (%d,%d) "
                            "want (%d,%d)",
                            c.n_rx, c.n_tx, trial, report.wb_ri,
                            report.wb_tpmi, oracle.wb_ri, oracle.wb_tpmi)};
      }
      for (int b = 0; b < n_rbg; ++b) {
        worst_mi = std::max(
            worst_mi, std::abs(report.mi_per_rbg[b] - oracle.mi_per_rbg[b]));
      }
      worst_cell = std::max(worst_cell, oracle.max_cell_diff);
      ++checked;
    }
  }
  const bool ok = worst_cell < 1e-9 && worst_mi < 1e-9;
  return {ok, strf("codebook search vs naive oracle on %d channels, "
                   "max cell |err| %.2e, max report |err| %.2e",
                   checked, worst_cell, worst_mi)};
}

// ---------------------------------------------------------------------------
// Criterion 3: reference-point exactness and PDO monotonicity.

Outcome criterion3(Suite& s) {
  Rng rng(3003);
  const adapt::AdaptationConfig cfg;
  double worst_knot = 0.0;
  bool monotone = true;
  for (int trial = 0; trial < 1000 && monotone; ++trial) {
    std::vector<CMat> h = {random_channel(rng, 2, 2),
                           random_channel(rng, 2, 2)};
    std::vector<CMat> w = {CMat::identity(2), CMat::identity(2)};
    const auto [report, curve] = adapt::build_mi_curve(s.engine2, h, w, cfg);
    const double cap = report.wb_ri * 8.0;

    for (const adapt::MiCurve::Point& pt : curve.points) {
      const std::vector<double> at = adapt::adapted_mi(curve, pt.pdo_db, cap);
      for (std::size_t b = 0; b < at.size(); ++b) {
        worst_knot =
            std::max(worst_knot, std::abs(at[b] - pt.mi_per_rbg[b]));
      }
    }

    std::vector<double> prev(curve.points.front().mi_per_rbg.size(), -1.0);
    for (double pdo = -20.0; pdo <= 20.0 + 1e-12; pdo += 0.5) {
      const std::vector<double> at = adapt::adapted_mi(curve, pdo, cap);
      for (std::size_t b = 0; b < at.size(); ++b) {
        if (at[b] < prev[b] - 1e-12) {
          monotone = false;
        }
        prev[b] = at[b];
      }
    }
  }
  const bool ok = worst_knot <= 1e-12 && monotone;
  return {ok, strf("1000 curves: max knot |err| %.2e, 0.5 dB sweep %s",
                   worst_knot, monotone ? "nondecreasing" : "NOT monotone")};
}

// ---------------------------------------------------------------------------
// Criterion 4: wideband selection is independent of the actual PDO.

Outcome criterion4(Suite& s) {
  Rng rng(4004);
  const adapt::AdaptationConfig cfg;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<CMat> h = {random_channel(rng, 2, 2),
                           random_channel(rng, 2, 2)};
    std::vector<CMat> w = {CMat::identity(2), CMat::identity(2)};
    int ri = -1;
    int tpmi = -1;
    for (const double pdo : {-15.0, -5.0, 0.0, 5.0, 15.0}) {
      const adapt::ScheduleDecision d =
          adapt::schedule(s.engine2, h, w, cfg, pdo, s.table);
      if (ri < 0) {
        ri = d.wb_ri;
        tpmi = d.wb_tpmi;
      } else if (d.wb_ri != ri || d.wb_tpmi != tpmi) {
        return {false, strf("selection changed with PDO on snapshot %d: "
                            "(%d,%d) vs (%d,%d)",
                            trial, ri, tpmi, d.wb_ri, d.wb_tpmi)};
      }
    }
  }
  return {true, "wideband (RI, TPMI) invariant across actual PDO on 1000 "
                "snapshots x 5 PDOs"};
}

// ---------------------------------------------------------------------------
// Criterion 5: threshold calibration closes on the 10% target.

Outcome criterion5(Suite& s) {
  const sim::BlockErrorModel model{sim::ErrorModelParams{}};
  mcs::McsTable fresh =
      mcs::load_mcs_index_table(io::mcs_index_table_path());
  const int drops = 20000;
  const mcs::CalibrationResult result = mcs::calibrate(
      fresh, model.oracle(), 0.10, 0.005, drops, 0xacce5501ull);

  // Out-of-sample: a disjoint random stream at each calibrated threshold.
  double worst = 0.0;
  for (const mcs::McsEntry& e : fresh.entries) {
    Rng rng(substream(0xacce5502ull, 0x6f6f73ull,
                      static_cast<std::uint64_t>(e.index), 0));
    int errors = 0;
    for (int i = 0; i < drops; ++i) {
      errors += model.draw(e.mi_threshold, e, rng) ? 0 : 1;
    }
    const double bler = static_cast<double>(errors) / drops;
    worst = std::max(worst, std::abs(bler - 0.10));
  }
  const bool ok = result.converged && worst <= 0.03;
  if (ok) {
    s.table = fresh;  // later criteria run on the calibrated thresholds
  }
  return {ok, strf("calibration %s; out-of-sample BLER within %.3f of 0.10 "
                   "(%d drops per index)",
                   result.converged ? "converged" : "did NOT converge", worst,
                   drops)};
}

// ---------------------------------------------------------------------------
// Criterion 6: BLER trends at desk scale for PDO +-3 dB.

Outcome criterion6(Suite& s) {
  const double a = kAlphaDefault;
  const double on_peak = std::max(max_bler(s.run(-3.0, true, a)),
                                  max_bler(s.run(3.0, true, a)));
  const double off_m3_peak = max_bler(s.run(-3.0, false, a));
  const double off_p3_peak = max_bler(s.run(3.0, false, a));
  const bool ok = on_peak <= 0.15 && off_m3_peak >= 0.5 && off_p3_peak <= 0.05;
  return {ok, strf("adapted BLER peak %.3f (<= 0.15), unadapted peak %.3f at "
                   "-3 dB (>= 0.5) and %.3f at +3 dB (<= 0.05)",
                   on_peak, off_m3_peak, off_p3_peak)};
}

// ---------------------------------------------------------------------------
// Criterion 7: ON/OFF throughput separation widens from +-3 to +-10 dB.

Outcome criterion7(Suite& s) {
  const double a = kAlphaDefault;
  auto sep = [&](double pdo) {
    return std::abs(mean_tput(s.run(pdo, true, a)) -
                    mean_tput(s.run(pdo, false, a)));
  };
  const double p3 = sep(3.0);
  const double m3 = sep(-3.0);
  const double p10 = sep(10.0);
  const double m10 = sep(-10.0);
  const bool ok = p10 > p3 && m10 > m3;
  return {ok, strf("throughput separation %.0f at +10 vs %.0f at +3, "
                   "%.0f at -10 vs %.0f at -3 bits/slot",
                   p10, p3, m10, m3)};
}

// ---------------------------------------------------------------------------
// Criterion 8: adaptation gain signs, ordering, and the starved baseline.

Outcome criterion8(Suite& s) {
  const double a = kAlphaDefault;
  auto gain = [&](double pdo) {
    return sim::throughput_gain(s.run(pdo, true, a), s.run(pdo, false, a));
  };
  const double g_p3 = gain(3.0);
  const double g_m3 = gain(-3.0);
  const double g_p20 = gain(20.0);
  const double g_m20 = gain(-20.0);
  const double off_m20 = mean_tput(s.run(-20.0, false, a));

  bool ok = g_p3 > 0.0 && g_m3 > 0.0 && g_p20 > 0.0;
  ok = ok && g_m3 > g_p3 && g_p20 > g_p3;
  std::string sentinel;
  if (off_m20 == 0.0) {
    ok = ok && std::isinf(g_m20) && g_m20 > 0.0;
    sentinel = strf("gain(-20) = %s (zero baseline)",
                    io::format_gain(g_m20).c_str());
  } else {
    // The baseline still moves data at -20 dB on this grid; the infinity
    // sentinel is exercised on a synthetic zero-throughput curve instead.
    sim::SimResult zero = s.run(-20.0, false, a);
    for (sim::SnrPointResult& p : zero.points) {
      p.throughput_bits_per_slot = 0.0;
    }
    const double g = sim::throughput_gain(s.run(-20.0, true, a), zero);
    ok = ok && std::isinf(g) && g > 0.0 && io::format_gain(g) == "inf";
    sentinel = strf("gain(-20) = %.2f, zero-baseline sentinel = %s",
                    g_m20, io::format_gain(g).c_str());
  }
  return {ok, strf("gains +3: %.2f, -3: %.2f, +20: %.2f; %s", g_p3, g_m3,
                   g_p20, sentinel.c_str())};
}

// ---------------------------------------------------------------------------
// Criterion 9: insensitivity to the curve scaling factor.

Outcome criterion9(Suite& s) {
  const double alphas[] = {2.0, kAlphaDefault, 5.0};
  double spread = 0.0;
  for (const double pdo : {-3.0, 3.0}) {
    double lo = 1.0;
    double hi = 0.0;
    for (const double a : alphas) {
      const double m = mean_bler(s.run(pdo, true, a));
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    spread = std::max(spread, hi - lo);
  }
  return {spread <= 0.05,
          strf("mean adapted BLER spread %.4f across alpha {2, sqrt10, 5} "
               "(<= 0.05)",
               spread)};
}

// ---------------------------------------------------------------------------
// Criterion 10: byte-identical result files on a repeated run.

Outcome criterion10(Suite& s) {
  namespace fs = std::filesystem;
  const double a = kAlphaDefault;
  const fs::path dir = fs::temp_directory_path() / "pdolink_acceptance";
  fs::create_directories(dir);

  const fs::path pa = dir / "rerun_a.csv";
  const fs::path pb = dir / "rerun_b.csv";
  io::write_results_csv(pa.string(),
                        {s.run(3.0, true, a), s.run(3.0, false, a)});

  // Fresh computation of the same scenarios, not the cached results.
  const sim::SimDeps deps{&s.engine4, &s.table};
  const sim::SimResult on = sim::run_scenario(s.make_scenario(3.0, true, a),
                                              deps);
  const sim::SimResult off = sim::run_scenario(s.make_scenario(3.0, false, a),
                                               deps);
  io::write_results_csv(pb.string(), {on, off});

  std::ifstream fa(pa, std::ios::binary);
  std::ifstream fb(pb, std::ios::binary);
  std::ostringstream sa;
  std::ostringstream sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  fs::remove(pa);
  fs::remove(pb);
  const bool ok = !sa.str().empty() && sa.str() == sb.str();
  return {ok, strf("repeated desk-scale run: %zu-byte CSV %s", sa.str().size(),
                   ok ? "byte-identical" : "DIFFERS")};
}

}  // namespace

int main() {
  int failures = 0;
  Suite suite;

  const auto run = [&](int id, double budget_s, auto&& fn) {
    const auto t0 = Clock::now();
    bool ok = false;
    std::string detail;
    try {
      std::tie(ok, detail) = fn();
    } catch (const std::exception& e) {
      ok = false;
      detail = strf("exception: %s", e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (budget_s > 0.0 && secs >= budget_s) {
      ok = false;
      detail += strf("; exceeded %.0f s budget", budget_s);
    }
    std::printf("%s criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id,
                detail.c_str(), secs);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  };

  run(1, 1.0, [&] { return criterion1(); });
  run(2, 30.0, [&] { return criterion2(suite); });
  run(3, 30.0, [&] { return criterion3(suite); });
  run(4, 0.0, [&] { return criterion4(suite); });
  run(5, 300.0, [&] { return criterion5(suite); });
  run(6, 600.0, [&] { return criterion6(suite); });
  run(7, 0.0, [&] { return criterion7(suite); });
  run(8, 0.0, [&] { return criterion8(suite); });
  run(9, 0.0, [&] { return criterion9(suite); });
  run(10, 0.0, [&] { return criterion10(suite); });

  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
