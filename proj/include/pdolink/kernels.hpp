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

#pragma once

#include <complex>
#include <cstdint>

namespace pdolink::kern {

using cd = std::complex<double>;

/// Dispatch table for the numeric hot loops. Every entry has a scalar
/// reference implementation and, on x86-64 with AVX2, a vectorized variant
/// producing results within documented tolerance of the reference.
struct Backend {
  const char* name;

  /// c[m x n] = a[m x k] * b[k x n], row major, c must not alias a or b.
  void (*cmatmul)(const cd* a, int m, int k, const cd* b, int n, cd* c);

  /// c[k x k] = a^H * a for a[m x k], row major. c is Hermitian by
  /// construction; both triangles are written.
  void (*cgram)(const cd* a, int m, int k, cd* c);

  /// y[i] += alpha * x[i] for i in [0, n).
  void (*caxpy)(cd alpha, const cd* x, cd* y, int n);

  /// sum_k exp(j * (omega[k] * t + phi[k])). Phase arguments must satisfy
  /// |omega[k] * t + phi[k]| <= 1e8 for the stated accuracy.
  cd (*cis_sum)(const double* omega, const double* phi, int n, double t);
};

/// Portable reference backend. Always available.
const Backend& scalar_backend();

/// True when the CPU supports the AVX2+FMA variants.
bool avx2_available();

/// AVX2 backend. Calling this when avx2_available() is false throws.
const Backend& avx2_backend();

/// Backend selected at load time: AVX2 when available, scalar otherwise.
/// The environment variable PDOLINK_KERNELS ("scalar" or "avx2") overrides
/// the automatic choice.
const Backend& active();

}  // namespace pdolink::kern
