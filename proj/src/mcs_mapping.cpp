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
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pdolink/mcs_mapping.hpp"

namespace pdolink::mcs {

bool McsTable::calibrated() const {
  if (entries.empty()) {
    return false;
  }
  return std::all_of(entries.begin(), entries.end(), [](const McsEntry& e) {
    return std::isfinite(e.mi_threshold);
  });
}

namespace {

McsTable parse_table(const std::string& path, bool with_thresholds) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("mcs table: cannot open " + path);
  }
  McsTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::istringstream ss(line);
    McsEntry e;
    int rate_x1024 = 0;
    if (with_thresholds) {
      double se = 0.0;
      if (!(ss >> e.index >> e.q_m >> e.code_rate >> se >> e.mi_threshold)) {
        throw std::runtime_error("mcs table: bad line in " + path);
      }
      e.spectral_efficiency = se;
    } else {
      if (!(ss >> e.index >> e.q_m >> rate_x1024)) {
        throw std::runtime_error("mcs table: bad line in " + path);
      }
      e.code_rate = rate_x1024 / 1024.0;
      e.spectral_efficiency = e.q_m * e.code_rate;
    }
    if (e.index != static_cast<int>(table.entries.size())) {
      throw std::runtime_error("mcs table: indices must be 0..N contiguous");
    }
    if (e.q_m != 2 && e.q_m != 4 && e.q_m != 6) {
      throw std::runtime_error("mcs table: unsupported modulation order");
    }
    if (e.code_rate <= 0.0 || e.code_rate >= 1.0) {
      throw std::runtime_error("mcs table: code rate outside (0, 1)");
    }
    table.entries.push_back(e);
  }
  if (table.entries.empty()) {
    throw std::runtime_error("mcs table: no entries in " + path);
  }
  return table;
}

}  // namespace

McsTable load_mcs_index_table(const std::string& path) {
  return parse_table(path, false);
}

McsTable load_calibrated_table(const std::string& path) {
  McsTable t = parse_table(path, true);
  if (!t.calibrated()) {
    throw std::runtime_error("mcs table: non-finite threshold in " + path);
  }
  return t;
}

void save_calibrated_table(const McsTable& table, const std::string& path,
                           const std::string& header_note) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_calibrated_table: cannot open " + path);
  }
  out << "# pdolink calibrated MI2MCS table v1\n";
  if (!header_note.empty()) {
    out << "# " << header_note << "\n";
  }
  out << "# index q_m code_rate spectral_efficiency mi_threshold\n";
  char buf[160];
  for (const McsEntry& e : table.entries) {
    std::snprintf(buf, sizeof(buf), "%d %d %.17g %.17g %.17g\n", e.index,
                  e.q_m, e.code_rate, e.spectral_efficiency, e.mi_threshold);
    out << buf;
  }
  if (!out.good()) {
    throw std::runtime_error("save_calibrated_table: write failed " + path);
  }
}

int mi_to_mcs(double mi, const McsTable& table) {
  if (table.entries.empty()) {
    throw invalid_parameter("mi_to_mcs: empty table");
  }
  if (!table.calibrated()) {
    throw invalid_parameter("mi_to_mcs: table not calibrated");
  }
  int best = 0;
  for (const McsEntry& e : table.entries) {
    if (e.mi_threshold <= mi) {
      best = e.index;
    }
  }
  return best;
}

CalibrationResult calibrate(McsTable& table, const BlockErrorOracle& oracle,
                            double target_bler, double tol, int drops,
                            std::uint64_t seed, int max_iter) {
  if (table.entries.empty()) {
    throw invalid_parameter("calibrate: empty table");
  }
  if (!(target_bler > 0.0 && target_bler < 1.0)) {
    throw invalid_parameter("calibrate: target_bler outside (0, 1)");
  }
  if (!(tol > 0.0) || drops < 1) {
    throw invalid_parameter("calibrate: bad tolerance or drop count");
  }

  CalibrationResult result;
  result.drops = drops;
  result.thresholds.resize(table.entries.size());
  result.achieved_bler.resize(table.entries.size());
  result.iterations.resize(table.entries.size());

  auto empirical_bler = [&](double mi, const McsEntry& e, std::uint64_t tag) {
    Rng rng(substream(seed, 0x63616cull, static_cast<std::uint64_t>(e.index),
                      tag));
    int errors = 0;
    for (int d = 0; d < drops; ++d) {
      if (!oracle(mi, e, rng)) {
        ++errors;
      }
    }
    return static_cast<double>(errors) / drops;
  };

  for (std::size_t k = 0; k < table.entries.size(); ++k) {
    const McsEntry& e = table.entries[k];
    // Bracket: BLER is nonincreasing in MI. Low end 0 bits, high end the
    // per-layer MI ceiling plus slack.
    double lo = 0.0;
    double hi = 9.0;
    double blo = empirical_bler(lo, e, 1);
    double bhi = empirical_bler(hi, e, 2);
    if (blo < target_bler - tol || bhi > target_bler + tol) {
      std::ostringstream msg;
      msg << "calibrate: target " << target_bler << " not bracketed for MCS "
          << e.index << " (bler(" << lo << ")=" << blo << ", bler(" << hi
          << ")=" << bhi << ")";
      throw calibration_error(msg.str());
    }
    double mid = 0.5 * (lo + hi);
    double bmid = 0.0;
    bool ok = false;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
      mid = 0.5 * (lo + hi);
      bmid = empirical_bler(mid, e, 3 + static_cast<std::uint64_t>(iter));
      if (std::abs(bmid - target_bler) <= tol) {
        ok = true;
        break;
      }
      if (bmid > target_bler) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo < 1e-12) {
        // Discontinuous oracle (e.g. a step in MI): the band is never hit;
        // take the smallest MI whose BLER is at or below target.
        mid = hi;
        bmid = empirical_bler(mid, e, 2);
        ok = true;
        break;
      }
    }
    if (!ok) {
      std::ostringstream msg;
      msg << "calibrate: no convergence for MCS " << e.index << " after "
          << max_iter << " iterations (last bler " << bmid << " at mi " << mid
          << ", band " << target_bler << " +- " << tol << ")";
      throw calibration_error(msg.str());
    }
    result.thresholds[k] = mid;
    result.achieved_bler[k] = bmid;
    result.iterations[k] = iter + 1;
  }

  // Isotonic pass: thresholds must be nondecreasing in MCS index.
  for (std::size_t k = 1; k < result.thresholds.size(); ++k) {
    result.thresholds[k] =
        std::max(result.thresholds[k], result.thresholds[k - 1]);
  }
  for (std::size_t k = 0; k < table.entries.size(); ++k) {
    table.entries[k].mi_threshold = result.thresholds[k];
  }
  result.converged = true;
  return result;
}

long transport_block_bits(const McsEntry& entry, long n_re) {
  if (n_re < 1) {
    throw invalid_parameter("transport_block_bits: n_re must be >= 1");
  }
  return static_cast<long>(
      std::floor(entry.spectral_efficiency * static_cast<double>(n_re)));
}

}  // namespace pdolink::mcs
