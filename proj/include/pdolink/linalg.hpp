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

#include <array>
#include <complex>
#include <vector>

#include "pdolink/common.hpp"

namespace pdolink {

/// Dense complex matrix with inline storage for dimensions up to 4x4.
/// Row major. Antenna counts in this toolkit never exceed four, so a fixed
/// capacity avoids heap traffic in the per-drop hot loops.
class CMat {
 public:
  static constexpr int kMaxDim = 4;

  CMat() : rows_(0), cols_(0) {}

  CMat(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0 || rows > kMaxDim || cols > kMaxDim) {
      throw invalid_parameter("CMat dimensions must be within [0, 4]");
    }
    data_.fill(cd(0.0, 0.0));
  }

  static CMat identity(int n) {
    CMat m(n, n);
    for (int i = 0; i < n; ++i) {
      m(i, i) = cd(1.0, 0.0);
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  cd& operator()(int r, int c) { return data_[r * cols_ + c]; }
  const cd& operator()(int r, int c) const { return data_[r * cols_ + c]; }

  cd* data() { return data_.data(); }
  const cd* data() const { return data_.data(); }

  bool finite() const;

  /// Frobenius norm.
  double norm() const;

 private:
  int rows_;
  int cols_;
  std::array<cd, kMaxDim * kMaxDim> data_;
};

/// a * b via the active kernel backend.
CMat multiply(const CMat& a, const CMat& b);

/// a^H * a via the active kernel backend.
CMat gram(const CMat& a);

/// a^H.
CMat adjoint(const CMat& a);

CMat scale(const CMat& a, cd s);

CMat add(const CMat& a, const CMat& b);

/// Lower triangular L with L * L^H = a for Hermitian positive definite a.
/// Throws decomposition_error when a pivot drops below a small positive
/// floor.
CMat cholesky_lower(const CMat& a);

/// Inverse of a lower triangular matrix by forward substitution.
CMat lower_triangular_inverse(const CMat& l);

/// Whitening matrix W = L^{-1} for covariance cov = L * L^H, so that
/// W * cov * W^H = I. Throws decomposition_error for non positive definite
/// input.
CMat whitening_matrix(const CMat& cov);

/// Diagonal entries of inv(a) for Hermitian positive definite a, computed
/// through the Cholesky factor. Result imaginary parts are discarded; for a
/// Hermitian PD matrix they vanish up to rounding.
std::vector<double> hermitian_inverse_diagonal(const CMat& a);

}  // namespace pdolink
