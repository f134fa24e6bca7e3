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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "pdolink/io/config.hpp"
#include "pdolink/link_simulator.hpp"
#include "pdolink/mcs_mapping.hpp"

using namespace pdolink;
using namespace pdolink::mcs;

namespace {

McsTable base_table() {
  return load_mcs_index_table(io::mcs_index_table_path());
}

/// Empirical BLER of an oracle at a fixed received MI, fresh substream.
double empirical_bler(const BlockErrorOracle& oracle, double mi,
                      const McsEntry& e, std::uint64_t seed, int drops) {
  Rng rng(seed);
  int errors = 0;
  for (int i = 0; i < drops; ++i) {
    if (!oracle(mi, e, rng)) {
      ++errors;
    }
  }
  return static_cast<double>(errors) / drops;
}

}  // namespace

TEST_CASE("mi_to_mcs floor, ceiling, and inclusive boundary") {
  McsTable t = base_table();
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    t.entries[i].mi_threshold = 0.2 * (i + 1);
  }
  CHECK(mi_to_mcs(0.0, t) == 0);
  CHECK(mi_to_mcs(0.1, t) == 0);
  CHECK(mi_to_mcs(1000.0, t) == 28);
  CHECK(mi_to_mcs(t.entries[10].mi_threshold, t) == 10);  // inclusive
  CHECK(mi_to_mcs(t.entries[10].mi_threshold - 1e-9, t) == 9);

  int prev = 0;
  for (double mi = 0.0; mi <= 6.5; mi += 0.01) {
    const int k = mi_to_mcs(mi, t);
    CHECK(k >= prev);
    prev = k;
  }
}

TEST_CASE("mi_to_mcs rejects empty or uncalibrated tables") {
  McsTable empty;
  CHECK_THROWS(mi_to_mcs(1.0, empty));
  McsTable raw = base_table();
  CHECK_THROWS(mi_to_mcs(1.0, raw));
}

TEST_CASE("calibrate against the step-function oracle finds SE exactly") {
  McsTable t = base_table();
  const BlockErrorOracle step = [](double mi, const McsEntry& e, Rng&) {
    return mi >= e.spectral_efficiency;
  };
  const CalibrationResult result = calibrate(t, step, 0.10, 0.005, 400, 3);
  REQUIRE(result.thresholds.size() == t.entries.size());
  // The standard table has one SE inversion (index 17 trades code rate for a
  // higher order), so the isotonic pass pins it to the previous threshold.
  double se_max = 0.0;
  for (const McsEntry& e : t.entries) {
    se_max = std::max(se_max, e.spectral_efficiency);
    CHECK(std::abs(e.mi_threshold - se_max) < 1e-9);
  }
  CHECK(t.calibrated());
}

TEST_CASE("calibrate on a symmetric logistic at 50% finds the midpoint") {
  McsTable t = base_table();
  const double delta = 0.25;
  const BlockErrorOracle logistic = [delta](double mi, const McsEntry& e,
                                            Rng& rng) {
    const double c = e.spectral_efficiency + delta;
    const double p = 1.0 / (1.0 + std::exp(-(mi - c) / 0.05));
    return rng.uniform() < p;
  };
  const CalibrationResult result =
      calibrate(t, logistic, 0.5, 0.01, 60000, 17);
  CHECK(result.converged);
  for (const McsEntry& e : t.entries) {
    // Median of the logistic is its center; Monte-Carlo tolerance applies.
    CHECK(std::abs(e.mi_threshold - (e.spectral_efficiency + delta)) < 0.02);
  }
}

TEST_CASE("calibration with the default PHY model") {
  McsTable t = base_table();
  const sim::BlockErrorModel model{sim::ErrorModelParams{}};
  const double target = 0.10;
  const double tol = 0.005;
  const CalibrationResult result =
      calibrate(t, model.oracle(), target, tol, 40000, 7);
  CHECK(result.converged);
  CHECK(result.drops == 40000);

  SUBCASE("thresholds strictly increasing and above SE") {
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      CHECK(t.entries[i].mi_threshold >= t.entries[i].spectral_efficiency);
      if (i > 0) {
        CHECK(t.entries[i].mi_threshold > t.entries[i - 1].mi_threshold);
      }
    }
  }

  SUBCASE("self-consistency: mi_to_mcs(threshold[k]) = k") {
    for (const McsEntry& e : t.entries) {
      CHECK(mi_to_mcs(e.mi_threshold, t) == e.index);
    }
  }

  SUBCASE("closed-form check of the logistic quantile") {
    // P(success) = sigmoid((mi - c)/s) = 1 - target at the threshold, so
    // threshold = c + s ln((1-target)/target).
    for (const McsEntry& e : t.entries) {
      const double c = model.midpoint(e);
      const double s = model.slope(e);
      const double expect = c + s * std::log((1.0 - target) / target);
      CHECK(std::abs(e.mi_threshold - expect) < 0.02);
    }
  }

  SUBCASE("out-of-sample BLER within tolerance band") {
    for (const McsEntry& e : t.entries) {
      const double bler = empirical_bler(
          model.oracle(), e.mi_threshold, e, 0xf2e50ull + e.index, 40000);
      CHECK(std::abs(bler - target) < 0.03);
    }
  }

  SUBCASE("persistence round trip") {
    const std::string path = "/tmp/pdolink_mi2mcs_test.txt";
    save_calibrated_table(t, path, "unit test");
    const McsTable loaded = load_calibrated_table(path);
    REQUIRE(loaded.entries.size() == t.entries.size());
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      CHECK(loaded.entries[i].index == t.entries[i].index);
      CHECK(loaded.entries[i].q_m == t.entries[i].q_m);
      CHECK(loaded.entries[i].code_rate == t.entries[i].code_rate);
      CHECK(loaded.entries[i].spectral_efficiency ==
            t.entries[i].spectral_efficiency);
      CHECK(loaded.entries[i].mi_threshold == t.entries[i].mi_threshold);
    }
    CHECK(loaded.calibrated());
    std::filesystem::remove(path);
  }
}

TEST_CASE("calibrate reports bracket failures") {
  McsTable t = base_table();
  const BlockErrorOracle never_fails = [](double, const McsEntry&, Rng&) {
    return true;
  };
  CHECK_THROWS_AS(calibrate(t, never_fails, 0.10, 0.005, 200, 3),
                  calibration_error);
}

TEST_CASE("transport_block_bits") {
  McsEntry e;
  e.spectral_efficiency = 1.0;
  CHECK(transport_block_bits(e, 96) == 96);
  e.spectral_efficiency = 0.0;
  CHECK(transport_block_bits(e, 96) == 0);
  e.spectral_efficiency = 6.0 * 948.0 / 1024.0;  // 5.5547
  CHECK(transport_block_bits(e, 96) == 533);
  CHECK_THROWS_AS(transport_block_bits(e, 0), invalid_parameter);
}
