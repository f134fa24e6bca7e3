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
#include <map>
#include <sstream>

#include <json.hpp>

#include "pdolink/build_info.hpp"
#include "pdolink/io/results.hpp"

namespace pdolink::io {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void write_results_csv(const std::string& path,
                       const std::vector<sim::SimResult>& results) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_results_csv: cannot open " + path);
  }
  out << "scenario_id,pdo_db,adaptation,snr_db,bler,"
         "throughput_bits_per_slot,mean_mcs,drops,seed\n";
  for (const sim::SimResult& r : results) {
    for (const sim::SnrPointResult& p : r.points) {
      out << r.scenario_id << ',' << fmt(r.pdo_db) << ','
          << (r.adaptation_on ? "on" : "off") << ',' << fmt(p.snr_db) << ','
          << fmt(p.bler) << ',' << fmt(p.throughput_bits_per_slot) << ','
          << fmt(p.mean_mcs) << ',' << r.drops << ',' << r.seed << "\n";
    }
  }
  if (!out.good()) {
    throw std::runtime_error("write_results_csv: write failed for " + path);
  }
}

void write_manifest(const std::string& path, const std::string& scenario_id,
                    const std::string& resolved_config_json,
                    const std::vector<std::string>& outputs,
                    std::uint64_t seed, double duration_seconds) {
  nlohmann::json doc;
  doc["scenario_id"] = scenario_id;
  doc["version"] = kVersion;
  doc["seed"] = seed;
  doc["outputs"] = outputs;
  doc["duration_seconds"] = duration_seconds;
  doc["resolved_config"] = nlohmann::json::parse(resolved_config_json);
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_manifest: cannot open " + path);
  }
  out << doc.dump(2) << "\n";
  if (!out.good()) {
    throw std::runtime_error("write_manifest: write failed for " + path);
  }
}

std::vector<CsvCurve> read_results_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("read_results_csv: cannot open " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("read_results_csv: empty file " + path);
  }
  std::map<std::pair<std::string, bool>, CsvCurve> curves;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::istringstream ss(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(ss, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() != 9) {
      throw std::runtime_error("read_results_csv: bad row at " + path + ":" +
                               std::to_string(line_no));
    }
    const bool on = fields[2] == "on";
    auto key = std::make_pair(fields[0], on);
    CsvCurve& c = curves[key];
    c.scenario_id = fields[0];
    c.pdo_db = std::stod(fields[1]);
    c.adaptation_on = on;
    c.snr_db.push_back(std::stod(fields[3]));
    c.throughput.push_back(std::stod(fields[5]));
  }
  std::vector<CsvCurve> out;
  out.reserve(curves.size());
  for (auto& [key, curve] : curves) {
    out.push_back(std::move(curve));
  }
  return out;
}

std::vector<GainRow> compute_gains(const std::vector<std::string>& csv_paths,
                                   std::vector<std::string>& unpaired) {
  std::map<std::string, const CsvCurve*> on_curves;
  std::map<std::string, const CsvCurve*> off_curves;
  std::vector<CsvCurve> all;
  for (const std::string& path : csv_paths) {
    std::vector<CsvCurve> curves = read_results_csv(path);
    for (CsvCurve& c : curves) {
      all.push_back(std::move(c));
    }
  }
  for (const CsvCurve& c : all) {
    (c.adaptation_on ? on_curves : off_curves)[c.scenario_id] = &c;
  }

  std::vector<GainRow> rows;
  unpaired.clear();
  for (const auto& [id, on] : on_curves) {
    auto it = off_curves.find(id);
    if (it == off_curves.end()) {
      unpaired.push_back(id + " (missing off)");
      continue;
    }
    const CsvCurve* off = it->second;
    if (on->snr_db != off->snr_db) {
      throw std::runtime_error("compute_gains: SNR grids differ for " + id);
    }
    GainRow row;
    row.scenario_id = id;
    row.pdo_db = on->pdo_db;
    double t_on = 0.0;
    double t_off = 0.0;
    for (std::size_t i = 0; i < on->throughput.size(); ++i) {
      t_on += on->throughput[i];
      t_off += off->throughput[i];
    }
    row.mean_throughput_on = t_on / on->throughput.size();
    row.mean_throughput_off = t_off / off->throughput.size();
    if (row.mean_throughput_off == 0.0) {
      row.gain = row.mean_throughput_on > 0.0
                     ? std::numeric_limits<double>::infinity()
                     : 0.0;
    } else {
      row.gain = (row.mean_throughput_on - row.mean_throughput_off) /
                 row.mean_throughput_off;
    }
    rows.push_back(row);
  }
  for (const auto& [id, off] : off_curves) {
    (void)off;
    if (on_curves.find(id) == on_curves.end()) {
      unpaired.push_back(id + " (missing on)");
    }
  }
  std::sort(rows.begin(), rows.end(), [](const GainRow& a, const GainRow& b) {
    return a.scenario_id < b.scenario_id;
  });
  std::sort(unpaired.begin(), unpaired.end());
  return rows;
}

std::string format_gain(double gain) {
  if (std::isinf(gain)) {
    return "inf";
  }
  return fmt(gain);
}

void write_gains_csv(const std::string& path,
                     const std::vector<GainRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_gains_csv: cannot open " + path);
  }
  out << "scenario_id,pdo_db,mean_throughput_on,mean_throughput_off,gain\n";
  for (const GainRow& r : rows) {
    out << r.scenario_id << ',' << fmt(r.pdo_db) << ','
        << fmt(r.mean_throughput_on) << ',' << fmt(r.mean_throughput_off)
        << ',' << format_gain(r.gain) << "\n";
  }
  if (!out.good()) {
    throw std::runtime_error("write_gains_csv: write failed for " + path);
  }
}

}  // namespace pdolink::io
