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
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pdolink/build_info.hpp"
#include "pdolink/io/config.hpp"

namespace pdolink::io {

using nlohmann::json;

std::string data_dir() {
  const char* env = std::getenv("PDOLINK_DATA_DIR");
  if (env != nullptr && env[0] != '\0') {
    return env;
  }
  return kDefaultDataDir;
}

std::string profiles_path() { return data_dir() + "/channel_profiles.json"; }
std::string codebook_path() { return data_dir() + "/ul_codebook.json"; }
std::string mi_tables_path() { return data_dir() + "/mi_tables.txt"; }
std::string mcs_index_table_path() {
  return data_dir() + "/mcs_index_table.txt";
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw config_error("config: field '" + field + "': " + why);
}

double get_number(const json& obj, const std::string& section,
                  const std::string& key, double fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  if (!obj[key].is_number()) {
    fail(section + "." + key, "expected a number");
  }
  return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& section, const std::string& key,
            int fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  if (!obj[key].is_number_integer()) {
    fail(section + "." + key, "expected an integer");
  }
  return obj[key].get<int>();
}

bool get_bool(const json& obj, const std::string& section,
              const std::string& key, bool fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  if (!obj[key].is_boolean()) {
    fail(section + "." + key, "expected a boolean");
  }
  return obj[key].get<bool>();
}

std::string get_string(const json& obj, const std::string& section,
                       const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) {
    return fallback;
  }
  if (!obj[key].is_string()) {
    fail(section + "." + key, "expected a string");
  }
  return obj[key].get<std::string>();
}

struct PresetDefaults {
  std::string profile = "EPA";
  double doppler_hz = 5.0;
  int n_tx = 4;
  int n_rx = 4;
  int srs_comb = 4;
  int n_rbg = 8;
};

PresetDefaults preset_defaults(const std::string& name) {
  PresetDefaults d;
  std::string base = name;
  if (base.size() > 5 && base.substr(base.size() - 5) == "_full") {
    base = base.substr(0, base.size() - 5);
    d.n_rbg = 68;
  }
  if (base == "setting1") {
    return d;
  }
  if (base == "setting2") {
    d.profile = "EVA";
    d.doppler_hz = 20.0;
    d.n_tx = 2;
    d.n_rx = 2;
    d.srs_comb = 2;
    return d;
  }
  fail("scenario.preset", "unknown preset '" + name + "'");
}

std::string format_pdo(double pdo_db) {
  char buf[32];
  if (pdo_db == std::floor(pdo_db)) {
    std::snprintf(buf, sizeof(buf), "%+d", static_cast<int>(pdo_db));
  } else {
    std::snprintf(buf, sizeof(buf), "%+g", pdo_db);
  }
  return buf;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }
  static const char* kSections[] = {"scenario",   "channel", "grid",
                                    "power",      "adaptation", "simulation",
                                    "calibration", "paths"};
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    bool known = false;
    for (const char* s : kSections) {
      known = known || key == s;
    }
    if (!known) {
      fail(key, "unknown section");
    }
  }
  const json empty = json::object();
  const json& jscenario = doc.contains("scenario") ? doc["scenario"] : empty;
  const json& jchannel = doc.contains("channel") ? doc["channel"] : empty;
  const json& jgrid = doc.contains("grid") ? doc["grid"] : empty;
  const json& jpower = doc.contains("power") ? doc["power"] : empty;
  const json& jadapt = doc.contains("adaptation") ? doc["adaptation"] : empty;
  const json& jsim = doc.contains("simulation") ? doc["simulation"] : empty;
  const json& jcal = doc.contains("calibration") ? doc["calibration"] : empty;
  const json& jpaths = doc.contains("paths") ? doc["paths"] : empty;

  PresetDefaults preset;
  if (jscenario.contains("preset")) {
    preset = preset_defaults(jscenario["preset"].get<std::string>());
  }

  sim::Scenario base;
  base.pdo_db = get_number(jscenario, "scenario", "pdo_db", 0.0);
  if (!std::isfinite(base.pdo_db) || std::abs(base.pdo_db) > 40.0) {
    fail("scenario.pdo_db", "must be finite and within +-40 dB");
  }
  base.drops = get_int(jscenario, "scenario", "drops_per_snr", 500);
  if (base.drops < 1) {
    fail("scenario.drops_per_snr", "must be >= 1");
  }
  base.seed = static_cast<std::uint64_t>(
      get_number(jscenario, "scenario", "seed", 1.0));
  if (jscenario.contains("snr_grid_db")) {
    if (!jscenario["snr_grid_db"].is_array() ||
        jscenario["snr_grid_db"].empty()) {
      fail("scenario.snr_grid_db", "expected a nonempty array");
    }
    base.snr_grid_db =
        jscenario["snr_grid_db"].get<std::vector<double>>();
  } else {
    base.snr_grid_db = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
  }

  base.profile.name = get_string(jchannel, "channel", "profile",
                                 preset.profile);
  base.profile.doppler_hz =
      get_number(jchannel, "channel", "doppler_hz", preset.doppler_hz);
  if (base.profile.doppler_hz < 0.0) {
    fail("channel.doppler_hz", "must be >= 0");
  }
  base.profile.n_tx = get_int(jchannel, "channel", "n_tx", preset.n_tx);
  base.profile.n_rx = get_int(jchannel, "channel", "n_rx", preset.n_rx);
  if (base.profile.n_tx != 2 && base.profile.n_tx != 4) {
    fail("channel.n_tx", "codebooks exist for 2 or 4 ports");
  }
  if (base.profile.n_rx < 1 || base.profile.n_rx > 4) {
    fail("channel.n_rx", "must be in [1, 4]");
  }
  {
    const chan::ChannelProfile taps =
        chan::load_profile(profiles_path(), base.profile.name);
    base.profile.tap_delays_ns = taps.tap_delays_ns;
    base.profile.tap_powers_db = taps.tap_powers_db;
  }

  base.grid.n_rbg = get_int(jgrid, "grid", "n_rbg", preset.n_rbg);
  base.grid.rbs_per_rbg = get_int(jgrid, "grid", "rbs_per_rbg", 4);
  base.grid.subcarrier_spacing_hz =
      get_number(jgrid, "grid", "subcarrier_spacing_hz", 30e3);
  base.grid.srs_comb = get_int(jgrid, "grid", "srs_comb", preset.srs_comb);
  if (base.grid.n_rbg < 1 || base.grid.n_rbg > 256) {
    fail("grid.n_rbg", "must be in [1, 256]");
  }
  if (base.grid.rbs_per_rbg < 1 || base.grid.rbs_per_rbg > 16) {
    fail("grid.rbs_per_rbg", "must be in [1, 16]");
  }
  if (base.grid.srs_comb != 2 && base.grid.srs_comb != 4) {
    fail("grid.srs_comb", "must be 2 or 4");
  }
  if (base.grid.subcarrier_spacing_hz <= 0.0) {
    fail("grid.subcarrier_spacing_hz", "must be > 0");
  }
  base.n_rbg_pusch = get_int(jgrid, "grid", "n_rbg_pusch", 2);
  if (base.n_rbg_pusch < 1 || base.n_rbg_pusch > base.grid.n_rbg) {
    fail("grid.n_rbg_pusch", "must be in [1, n_rbg]");
  }
  base.data_res_per_rb = get_int(jgrid, "grid", "data_res_per_rb", 144);
  if (base.data_res_per_rb < 12 || base.data_res_per_rb > 168) {
    fail("grid.data_res_per_rb", "must be in [12, 168]");
  }

  base.k2 = get_int(jpower, "power", "k2", 3);
  if (base.k2 < 0) {
    fail("power.k2", "must be >= 0");
  }
  const int mu = get_int(jpower, "power", "mu", 1);
  if (mu < 0 || mu > 4) {
    fail("power.mu", "must be in {0..4}");
  }
  base.pusch_params.mu = mu;
  base.srs_params.mu = mu;
  const double p_cmax = get_number(jpower, "power", "p_cmax_dbm", 23.0);
  base.pusch_params.p_cmax_dbm = p_cmax;
  base.srs_params.p_cmax_dbm = p_cmax;
  const double alpha_pc = get_number(jpower, "power", "alpha_pc", 1.0);
  if (alpha_pc < 0.0 || alpha_pc > 1.0) {
    fail("power.alpha_pc", "must be in [0, 1]");
  }
  base.pusch_params.alpha_pc = alpha_pc;
  base.srs_params.alpha_pc = alpha_pc;
  const double pathloss = get_number(jpower, "power", "pathloss_db", 100.0);
  if (pathloss < 0.0) {
    fail("power.pathloss_db", "must be >= 0");
  }
  base.pusch_state.pathloss_db = pathloss;
  base.srs_state.pathloss_db = pathloss;
  base.pusch_state.delta_tf_db =
      get_number(jpower, "power", "delta_tf_db", 0.0);
  base.pusch_state.closed_loop_db =
      get_number(jpower, "power", "closed_loop_pusch_db", 0.0);
  base.srs_state.closed_loop_db =
      get_number(jpower, "power", "closed_loop_srs_db", 0.0);
  base.noise_dbm_per_re =
      get_number(jpower, "power", "noise_dbm_per_re", -121.4);
  if (!std::isfinite(base.noise_dbm_per_re)) {
    fail("power.noise_dbm_per_re", "must be finite");
  }

  base.adaptation.alpha_scale =
      get_number(jadapt, "adaptation", "alpha_scale", 3.1622776601683795);
  if (!(base.adaptation.alpha_scale > 1.0) ||
      !std::isfinite(base.adaptation.alpha_scale)) {
    fail("adaptation.alpha_scale", "must be > 1");
  }

  RunConfig cfg;
  if (jadapt.contains("modulation_penalty_db")) {
    const json& pen = jadapt["modulation_penalty_db"];
    if (!pen.is_array() || pen.size() != csi::kNumModulations) {
      fail("adaptation.modulation_penalty_db", "expected 4 numbers");
    }
    for (int i = 0; i < csi::kNumModulations; ++i) {
      cfg.modulation_penalty_db[i] = pen[i].get<double>();
    }
  }

  base.threads = get_int(jsim, "simulation", "threads", 0);
  base.normalize_estimate =
      get_bool(jsim, "simulation", "normalize_estimate", true);
  base.scheduling_backoff_db =
      get_number(jsim, "simulation", "scheduling_backoff_db", 1.5);
  if (!(base.scheduling_backoff_db >= 0.0 &&
        base.scheduling_backoff_db < 20.0)) {
    fail("simulation.scheduling_backoff_db", "must be in [0, 20)");
  }
  if (jsim.contains("error_model")) {
    const json& em = jsim["error_model"];
    base.error_model.offset_base =
        get_number(em, "simulation.error_model", "offset_base", 0.12);
    base.error_model.offset_per_qm =
        get_number(em, "simulation.error_model", "offset_per_qm", 0.05);
    base.error_model.slope_base =
        get_number(em, "simulation.error_model", "slope_base", 0.045);
    base.error_model.slope_per_se =
        get_number(em, "simulation.error_model", "slope_per_se", 0.0075);
    if (base.error_model.slope_base <= 0.0) {
      fail("simulation.error_model.slope_base", "must be > 0");
    }
  }

  cfg.calibration.target_bler =
      get_number(jcal, "calibration", "target_bler", 0.10);
  if (!(cfg.calibration.target_bler > 0.0 &&
        cfg.calibration.target_bler < 1.0)) {
    fail("calibration.target_bler", "must be in (0, 1)");
  }
  cfg.calibration.tolerance =
      get_number(jcal, "calibration", "tolerance", 0.005);
  if (!(cfg.calibration.tolerance > 0.0)) {
    fail("calibration.tolerance", "must be > 0");
  }
  cfg.calibration.drops = get_int(jcal, "calibration", "drops", 50000);
  if (cfg.calibration.drops < 100) {
    fail("calibration.drops", "must be >= 100");
  }
  cfg.calibration.seed = static_cast<std::uint64_t>(
      get_number(jcal, "calibration", "seed", 7.0));

  cfg.output_dir = get_string(jpaths, "paths", "output_dir", "");
  cfg.calibrated_table_path =
      get_string(jpaths, "paths", "calibrated_table", "");

  // Scenario id and adaptation expansion.
  std::string preset_name = get_string(jscenario, "scenario", "preset", "");
  std::string default_id =
      (preset_name.empty() ? std::string("scenario") : preset_name) +
      "_pdo" + format_pdo(base.pdo_db);
  base.id = get_string(jscenario, "scenario", "id", default_id);

  std::vector<bool> modes;
  if (jscenario.contains("adaptation")) {
    const json& ja = jscenario["adaptation"];
    auto push_mode = [&](const std::string& s) {
      if (s == "on") {
        modes.push_back(true);
      } else if (s == "off") {
        modes.push_back(false);
      } else {
        fail("scenario.adaptation", "expected \"on\" or \"off\"");
      }
    };
    if (ja.is_string()) {
      push_mode(ja.get<std::string>());
    } else if (ja.is_array()) {
      for (const json& v : ja) {
        push_mode(v.get<std::string>());
      }
    } else {
      fail("scenario.adaptation", "expected string or array");
    }
  } else {
    modes = {true, false};
  }

  // Canonical resolved dump (before mode expansion, plus the mode list).
  json resolved;
  resolved["scenario"] = {{"id", base.id},
                          {"pdo_db", base.pdo_db},
                          {"drops_per_snr", base.drops},
                          {"seed", base.seed},
                          {"snr_grid_db", base.snr_grid_db}};
  resolved["channel"] = {{"profile", base.profile.name},
                         {"doppler_hz", base.profile.doppler_hz},
                         {"n_tx", base.profile.n_tx},
                         {"n_rx", base.profile.n_rx}};
  resolved["grid"] = {{"n_rbg", base.grid.n_rbg},
                      {"rbs_per_rbg", base.grid.rbs_per_rbg},
                      {"subcarrier_spacing_hz", base.grid.subcarrier_spacing_hz},
                      {"srs_comb", base.grid.srs_comb},
                      {"n_rbg_pusch", base.n_rbg_pusch},
                      {"data_res_per_rb", base.data_res_per_rb}};
  resolved["power"] = {{"k2", base.k2},
                       {"mu", mu},
                       {"p_cmax_dbm", p_cmax},
                       {"alpha_pc", alpha_pc},
                       {"pathloss_db", pathloss},
                       {"noise_dbm_per_re", base.noise_dbm_per_re}};
  resolved["adaptation"] = {{"alpha_scale", base.adaptation.alpha_scale},
                            {"modulation_penalty_db", cfg.modulation_penalty_db}};
  resolved["simulation"] = {{"threads", base.threads},
                            {"normalize_estimate", base.normalize_estimate},
                            {"scheduling_backoff_db",
                             base.scheduling_backoff_db},
                            {"error_model",
                             {{"offset_base", base.error_model.offset_base},
                              {"offset_per_qm", base.error_model.offset_per_qm},
                              {"slope_base", base.error_model.slope_base},
                              {"slope_per_se", base.error_model.slope_per_se}}}};
  resolved["calibration"] = {{"target_bler", cfg.calibration.target_bler},
                             {"tolerance", cfg.calibration.tolerance},
                             {"drops", cfg.calibration.drops},
                             {"seed", cfg.calibration.seed}};
  json mode_list = json::array();
  for (bool on : modes) {
    mode_list.push_back(on ? "on" : "off");
  }
  resolved["scenario"]["adaptation"] = mode_list;
  cfg.resolved_json = resolved.dump(2);

  base.config_hash = fnv1a(cfg.resolved_json);
  for (bool on : modes) {
    sim::Scenario s = base;
    s.adaptation_on = on;
    cfg.scenarios.push_back(std::move(s));
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("config: cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string preset_config_json(const std::string& preset, double pdo_db) {
  json doc;
  doc["scenario"] = {{"preset", preset}, {"pdo_db", pdo_db}};
  return doc.dump(2);
}

}  // namespace pdolink::io
