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

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "pdolink/build_info.hpp"
#include "pdolink/io/config.hpp"
#include "pdolink/io/results.hpp"

namespace fs = std::filesystem;
using namespace pdolink;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMissingCalibration = 3;
constexpr int kExitUnpaired = 4;

std::string resolve_output_dir(const std::string& flag_value,
                               const io::RunConfig& cfg) {
  if (!flag_value.empty()) {
    return flag_value;
  }
  if (!cfg.output_dir.empty()) {
    return cfg.output_dir;
  }
  const char* env = std::getenv("PDOLINK_OUTPUT_DIR");
  if (env != nullptr && env[0] != '\0') {
    return env;
  }
  return ".";
}

std::string table_path_for(const io::RunConfig& cfg,
                           const std::string& flag_value,
                           const std::string& output_dir) {
  if (!flag_value.empty()) {
    return flag_value;
  }
  if (!cfg.calibrated_table_path.empty()) {
    return cfg.calibrated_table_path;
  }
  return output_dir + "/mi2mcs.txt";
}

void apply_seed_override(io::RunConfig& cfg,
                         const std::optional<std::uint64_t>& seed) {
  if (!seed.has_value()) {
    return;
  }
  cfg.calibration.seed = *seed;
  for (sim::Scenario& s : cfg.scenarios) {
    s.seed = *seed;
  }
}

int cmd_calibrate(const std::string& config_path,
                  const std::string& output_flag,
                  const std::optional<std::uint64_t>& seed) {
  io::RunConfig cfg = io::load_config(config_path);
  apply_seed_override(cfg, seed);
  const std::string out_dir = resolve_output_dir(output_flag, cfg);
  fs::create_directories(out_dir);

  mcs::McsTable table = mcs::load_mcs_index_table(io::mcs_index_table_path());
  const sim::BlockErrorModel model(cfg.scenarios.front().error_model);
  const auto t0 = std::chrono::steady_clock::now();
  const mcs::CalibrationResult result =
      mcs::calibrate(table, model.oracle(), cfg.calibration.target_bler,
                     cfg.calibration.tolerance, cfg.calibration.drops,
                     cfg.calibration.seed);
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();

  char note[160];
  std::snprintf(note, sizeof(note),
                "target_bler %.17g tolerance %.17g drops %d seed %llu",
                cfg.calibration.target_bler, cfg.calibration.tolerance,
                cfg.calibration.drops,
                static_cast<unsigned long long>(cfg.calibration.seed));
  const std::string table_path = out_dir + "/mi2mcs.txt";
  mcs::save_calibrated_table(table, table_path, note);
  io::write_manifest(out_dir + "/calibration.manifest.json", "calibration",
                     cfg.resolved_json, {table_path}, cfg.calibration.seed,
                     secs);

  std::printf("calibrated %zu MCS entries to BLER %.3f +- %.3f (%d drops)\n",
              table.entries.size(), cfg.calibration.target_bler,
              cfg.calibration.tolerance, cfg.calibration.drops);
  for (const mcs::McsEntry& e : table.entries) {
    std::printf("  mcs %2d  qm %d  se %.4f  threshold %.6f  bler %.4f\n",
                e.index, e.q_m, e.spectral_efficiency, e.mi_threshold,
                result.achieved_bler[e.index]);
  }
  std::printf("wrote %s\n", table_path.c_str());
  return kExitOk;
}

int cmd_simulate(const std::string& config_path,
                 const std::string& output_flag,
                 const std::string& table_flag,
                 const std::optional<std::uint64_t>& seed) {
  io::RunConfig cfg = io::load_config(config_path);
  apply_seed_override(cfg, seed);
  const std::string out_dir = resolve_output_dir(output_flag, cfg);
  fs::create_directories(out_dir);
  const std::string table_path = table_path_for(cfg, table_flag, out_dir);
  if (!fs::exists(table_path)) {
    std::fprintf(stderr,
                 "error: calibrated table %s not found; run `pdolink "
                 "calibrate` first\n",
                 table_path.c_str());
    return kExitMissingCalibration;
  }
  const mcs::McsTable table = mcs::load_calibrated_table(table_path);

  const int n_tx = cfg.scenarios.front().profile.n_tx;
  const csi::Codebook codebook = csi::Codebook::load(io::codebook_path(), n_tx);
  const csi::MiTableSet tables = csi::MiTableSet::load(io::mi_tables_path());
  csi::CsiEngine engine(codebook, tables);
  engine.set_modulation_penalty_db(cfg.modulation_penalty_db);
  const sim::SimDeps deps{&engine, &table};

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<sim::SimResult> results;
  results.reserve(cfg.scenarios.size());
  for (const sim::Scenario& s : cfg.scenarios) {
    results.push_back(sim::run_scenario(s, deps));
    const sim::SimResult& r = results.back();
    std::printf("%s [%s]:", r.scenario_id.c_str(),
                r.adaptation_on ? "on" : "off");
    for (const sim::SnrPointResult& p : r.points) {
      std::printf(" %.0fdB bler %.3f tput %.0f;", p.snr_db, p.bler,
                  p.throughput_bits_per_slot);
    }
    std::printf("\n");
  }
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();

  const std::string scenario_id = cfg.scenarios.front().id;
  const std::string csv_path = out_dir + "/" + scenario_id + ".csv";
  io::write_results_csv(csv_path, results);
  io::write_manifest(out_dir + "/" + scenario_id + ".manifest.json",
                     scenario_id, cfg.resolved_json, {csv_path},
                     cfg.scenarios.front().seed, secs);
  std::printf("wrote %s (%.1f s)\n", csv_path.c_str(), secs);
  return kExitOk;
}

int cmd_gains(const std::string& results_dir, const std::string& output_flag) {
  if (!fs::is_directory(results_dir)) {
    std::fprintf(stderr, "error: %s is not a directory\n",
                 results_dir.c_str());
    return kExitError;
  }
  std::vector<std::string> csv_paths;
  for (const fs::directory_entry& entry : fs::directory_iterator(results_dir)) {
    if (entry.path().extension() == ".csv" &&
        entry.path().filename() != "gains.csv") {
      csv_paths.push_back(entry.path().string());
    }
  }
  std::sort(csv_paths.begin(), csv_paths.end());
  if (csv_paths.empty()) {
    std::fprintf(stderr, "error: no result CSVs in %s\n", results_dir.c_str());
    return kExitError;
  }

  std::vector<std::string> unpaired;
  const std::vector<io::GainRow> rows = io::compute_gains(csv_paths, unpaired);
  if (!unpaired.empty()) {
    std::fprintf(stderr, "error: unpaired results (need both on and off):\n");
    for (const std::string& miss : unpaired) {
      std::fprintf(stderr, "  %s\n", miss.c_str());
    }
    return kExitUnpaired;
  }

  std::printf("%-28s %8s %14s %14s %10s\n", "scenario", "pdo_db", "tput_on",
              "tput_off", "gain");
  for (const io::GainRow& r : rows) {
    std::printf("%-28s %8.4g %14.1f %14.1f %10s\n", r.scenario_id.c_str(),
                r.pdo_db, r.mean_throughput_on, r.mean_throughput_off,
                io::format_gain(r.gain).c_str());
  }
  const std::string out_dir =
      output_flag.empty() ? results_dir : output_flag;
  fs::create_directories(out_dir);
  io::write_gains_csv(out_dir + "/gains.csv", rows);
  std::printf("wrote %s/gains.csv\n", out_dir.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PDO-aware uplink link adaptation simulator"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::string table_path;
  std::string results_dir;
  std::optional<std::uint64_t> seed;

  CLI::App* calibrate =
      app.add_subcommand("calibrate", "Calibrate the MI2MCS thresholds");
  calibrate->add_option("--config", config_path, "Config file")->required();
  calibrate->add_option("--output", output_dir, "Output directory");
  calibrate->add_option("--seed", seed, "Override the calibration seed");

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run the Monte-Carlo BLER sweep");
  simulate->add_option("--config", config_path, "Config file")->required();
  simulate->add_option("--output", output_dir, "Output directory");
  simulate->add_option("--table", table_path, "Calibrated MI2MCS table");
  simulate->add_option("--seed", seed, "Override the scenario seed");

  CLI::App* gains =
      app.add_subcommand("gains", "Summarize ON/OFF throughput gains");
  gains->add_option("--results", results_dir, "Directory with result CSVs")
      ->required();
  gains->add_option("--output", output_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (calibrate->parsed()) {
      return cmd_calibrate(config_path, output_dir, seed);
    }
    if (simulate->parsed()) {
      return cmd_simulate(config_path, output_dir, table_path, seed);
    }
    if (gains->parsed()) {
      return cmd_gains(results_dir, output_dir);
    }
  } catch (const config_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
