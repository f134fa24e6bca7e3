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

#include "pdolink/mi_table.hpp"

namespace pdolink::csi {

int modulation_order(Modulation m) {
  switch (m) {
    case Modulation::qpsk:
      return 2;
    case Modulation::qam16:
      return 4;
    case Modulation::qam64:
      return 6;
    case Modulation::qam256:
      return 8;
  }
  throw invalid_parameter("modulation_order: unknown modulation");
}

Modulation modulation_from_qm(int qm) {
  switch (qm) {
    case 2:
      return Modulation::qpsk;
    case 4:
      return Modulation::qam16;
    case 6:
      return Modulation::qam64;
    case 8:
      return Modulation::qam256;
    default:
      throw invalid_parameter("modulation_from_qm: unknown order");
  }
}

const char* modulation_name(Modulation m) {
  switch (m) {
    case Modulation::qpsk:
      return "QPSK";
    case Modulation::qam16:
      return "16QAM";
    case Modulation::qam64:
      return "64QAM";
    case Modulation::qam256:
      return "256QAM";
  }
  throw invalid_parameter("modulation_name: unknown modulation");
}

void gauss_hermite(int n, std::vector<double>& nodes,
                   std::vector<double>& weights) {
  if (n < 2) {
    throw invalid_parameter("gauss_hermite: need at least 2 nodes");
  }
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  double z = 0.0;
  double pp = 0.0;
  for (int i = 0; i < m; ++i) {
    // Initial guesses from the standard asymptotic root spacing.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) -
          1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * nodes[1];
    } else {
      z = 2.0 * z - nodes[i - 2];
    }
    for (int iter = 0; iter < 100; ++iter) {
      // Orthonormal Hermite recurrence for weight exp(-t^2).
      double p1 = 0.7511255444649425;  // pi^(-1/4)
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 -
             std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) {
        break;
      }
    }
    nodes[i] = z;
    nodes[n - 1 - i] = -z;
    weights[i] = 2.0 / (pp * pp);
    weights[n - 1 - i] = weights[i];
  }
  // The recurrence above walks roots from largest to smallest; report the
  // conventional ascending order.
  std::reverse(nodes.begin(), nodes.end());
  std::reverse(weights.begin(), weights.end());
}

double pam_mutual_information(int m_pam, double snr_linear, int quad_nodes) {
  if (m_pam < 2 || (m_pam & (m_pam - 1)) != 0) {
    throw invalid_parameter("pam_mutual_information: m must be a power of 2");
  }
  if (snr_linear < 0.0) {
    throw invalid_parameter("pam_mutual_information: negative SNR");
  }
  if (snr_linear == 0.0) {
    return 0.0;
  }
  static thread_local int cached_n = 0;
  static thread_local std::vector<double> t, w;
  if (cached_n != quad_nodes) {
    gauss_hermite(quad_nodes, t, w);
    cached_n = quad_nodes;
  }

  // Unit-energy PAM points; per-dimension noise variance 1/snr.
  const double delta = std::sqrt(3.0 / (static_cast<double>(m_pam) *
                                        static_cast<double>(m_pam) - 1.0));
  std::vector<double> x(m_pam);
  for (int i = 0; i < m_pam; ++i) {
    x[i] = (2.0 * i - m_pam + 1.0) * delta;
  }
  const double sigma2 = 1.0 / snr_linear;
  const double sigma = std::sqrt(sigma2);
  const double inv_sqrt_pi = 0.5641895835477563;

  // I = log2 M - (1/M) sum_i E_n log2 sum_j exp(-((x_i-x_j+n)^2 - n^2)/(2 s^2))
  double acc = 0.0;
  for (int i = 0; i < m_pam; ++i) {
    double e = 0.0;
    for (int k = 0; k < quad_nodes; ++k) {
      const double noise = M_SQRT2 * sigma * t[k];
      double inner = 0.0;
      for (int j = 0; j < m_pam; ++j) {
        const double d = x[i] - x[j] + noise;
        inner += std::exp(-(d * d - noise * noise) / (2.0 * sigma2));
      }
      e += w[k] * std::log2(inner);
    }
    acc += e * inv_sqrt_pi;
  }
  return std::log2(static_cast<double>(m_pam)) - acc / m_pam;
}

MiTableSet MiTableSet::generate(double snr_db_min, double snr_db_step,
                                int n_points, int quad_nodes) {
  if (n_points < 2 || snr_db_step <= 0.0) {
    throw invalid_parameter("MiTableSet::generate: bad grid");
  }
  MiTableSet set;
  set.snr_db_min_ = snr_db_min;
  set.snr_db_step_ = snr_db_step;
  set.n_points_ = n_points;
  for (int mi = 0; mi < kNumModulations; ++mi) {
    const int qm = modulation_order(static_cast<Modulation>(mi));
    const int m_pam = 1 << (qm / 2);
    std::vector<double>& tab = set.tables_[mi];
    tab.resize(n_points);
    for (int k = 0; k < n_points; ++k) {
      const double snr = db_to_linear(snr_db_min + k * snr_db_step);
      tab[k] = 2.0 * pam_mutual_information(m_pam, snr, quad_nodes);
    }
  }
  return set;
}

double MiTableSet::value_db(Modulation m, double sinr_db) const {
  if (!loaded()) {
    throw invalid_parameter("MiTableSet: tables not loaded");
  }
  const std::vector<double>& tab = tables_[static_cast<int>(m)];
  if (sinr_db <= snr_db_min_) {
    // Below the grid MI is proportional to linear SNR to first order.
    return tab.front() * db_to_linear(sinr_db - snr_db_min_);
  }
  const double pos = (sinr_db - snr_db_min_) / snr_db_step_;
  if (pos >= n_points_ - 1) {
    return tab.back();
  }
  const int k = static_cast<int>(pos);
  const double t = pos - k;
  return (1.0 - t) * tab[k] + t * tab[k + 1];
}

double MiTableSet::value(Modulation m, double sinr_linear) const {
  if (!(sinr_linear >= 0.0)) {
    throw invalid_parameter("MiTableSet::value: SINR must be >= 0");
  }
  if (sinr_linear == 0.0) {
    return 0.0;
  }
  return value_db(m, linear_to_db(sinr_linear));
}

void MiTableSet::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("MiTableSet::save: cannot open " + path);
  }
  out << "# pdolink modulation MI tables v1\n";
  out << "# coded-modulation capacity of square QAM in complex AWGN,\n";
  out << "# bits per symbol, uniform SNR grid in dB\n";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", snr_db_min_);
  out << "snr_db_min " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", snr_db_step_);
  out << "snr_db_step " << buf << "\n";
  out << "n_points " << n_points_ << "\n";
  for (int mi = 0; mi < kNumModulations; ++mi) {
    const auto m = static_cast<Modulation>(mi);
    out << "modulation " << modulation_name(m) << " qm "
        << modulation_order(m) << "\n";
    for (double v : tables_[mi]) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out << buf << "\n";
    }
  }
  if (!out.good()) {
    throw std::runtime_error("MiTableSet::save: write failed for " + path);
  }
}

MiTableSet MiTableSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("MiTableSet::load: cannot open " + path);
  }
  MiTableSet set;
  std::string line;
  int current = -1;
  int remaining = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    std::istringstream ss(line);
    if (remaining > 0) {
      double v = 0.0;
      if (!(ss >> v)) {
        throw std::runtime_error("MiTableSet::load: bad value line in " + path);
      }
      set.tables_[current].push_back(v);
      --remaining;
      continue;
    }
    std::string key;
    ss >> key;
    if (key == "snr_db_min") {
      ss >> set.snr_db_min_;
    } else if (key == "snr_db_step") {
      ss >> set.snr_db_step_;
    } else if (key == "n_points") {
      ss >> set.n_points_;
    } else if (key == "modulation") {
      std::string name, qm_key;
      int qm = 0;
      ss >> name >> qm_key >> qm;
      current = static_cast<int>(modulation_from_qm(qm));
      set.tables_[current].reserve(set.n_points_);
      remaining = set.n_points_;
    } else {
      throw std::runtime_error("MiTableSet::load: unknown key '" + key +
                               "' in " + path);
    }
  }
  if (set.n_points_ < 2) {
    throw std::runtime_error("MiTableSet::load: missing grid header in " +
                             path);
  }
  for (int mi = 0; mi < kNumModulations; ++mi) {
    if (static_cast<int>(set.tables_[mi].size()) != set.n_points_) {
      throw std::runtime_error("MiTableSet::load: incomplete table in " +
                               path);
    }
  }
  return set;
}

}  // namespace pdolink::csi
