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

#include "pdolink/kernels.hpp"

namespace pdolink::kern {
namespace {

void cmatmul_scalar(const cd* a, int m, int k, const cd* b, int n, cd* c) {
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      cd acc(0.0, 0.0);
      for (int l = 0; l < k; ++l) {
        acc += a[i * k + l] * b[l * n + j];
      }
      c[i * n + j] = acc;
    }
  }
}

void cgram_scalar(const cd* a, int m, int k, cd* c) {
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      cd acc(0.0, 0.0);
      for (int l = 0; l < m; ++l) {
        acc += std::conj(a[l * k + i]) * a[l * k + j];
      }
      c[i * k + j] = acc;
    }
  }
}

void caxpy_scalar(cd alpha, const cd* x, cd* y, int n) {
  for (int i = 0; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

cd cis_sum_scalar(const double* omega, const double* phi, int n, double t) {
  double re = 0.0;
  double im = 0.0;
  for (int i = 0; i < n; ++i) {
    const double ph = omega[i] * t + phi[i];
    re += std::cos(ph);
    im += std::sin(ph);
  }
  return cd(re, im);
}

}  // namespace

const Backend& scalar_backend() {
  static const Backend backend = {
      "scalar", cmatmul_scalar, cgram_scalar, caxpy_scalar, cis_sum_scalar,
  };
  return backend;
}

}  // namespace pdolink::kern
