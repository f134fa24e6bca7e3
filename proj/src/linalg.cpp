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
#include "pdolink/linalg.hpp"

namespace pdolink {

namespace {
constexpr double kPivotFloor = 1e-300;
}

bool CMat::finite() const {
  for (int i = 0; i < rows_ * cols_; ++i) {
    if (!std::isfinite(data_[i].real()) || !std::isfinite(data_[i].imag())) {
      return false;
    }
  }
  return true;
}

double CMat::norm() const {
  double acc = 0.0;
  for (int i = 0; i < rows_ * cols_; ++i) {
    acc += std::norm(data_[i]);
  }
  return std::sqrt(acc);
}

CMat multiply(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) {
    throw invalid_parameter("multiply: inner dimensions differ");
  }
  CMat c(a.rows(), b.cols());
  kern::active().cmatmul(a.data(), a.rows(), a.cols(), b.data(), b.cols(),
                         c.data());
  return c;
}

CMat gram(const CMat& a) {
  CMat c(a.cols(), a.cols());
  kern::active().cgram(a.data(), a.rows(), a.cols(), c.data());
  return c;
}

CMat adjoint(const CMat& a) {
  CMat c(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      c(j, i) = std::conj(a(i, j));
    }
  }
  return c;
}

CMat scale(const CMat& a, cd s) {
  CMat c = a;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      c(i, j) *= s;
    }
  }
  return c;
}

CMat add(const CMat& a, const CMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw invalid_parameter("add: dimensions differ");
  }
  CMat c = a;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      c(i, j) += b(i, j);
    }
  }
  return c;
}

CMat cholesky_lower(const CMat& a) {
  if (a.rows() != a.cols()) {
    throw invalid_parameter("cholesky_lower: matrix must be square");
  }
  const int n = a.rows();
  CMat l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      cd acc = a(i, j);
      for (int p = 0; p < j; ++p) {
        acc -= l(i, p) * std::conj(l(j, p));
      }
      if (i == j) {
        const double d = acc.real();
        if (!(d > kPivotFloor) || !std::isfinite(d)) {
          throw decomposition_error("cholesky_lower: not positive definite");
        }
        l(i, i) = cd(std::sqrt(d), 0.0);
      } else {
        l(i, j) = acc / l(j, j).real();
      }
    }
  }
  return l;
}

CMat lower_triangular_inverse(const CMat& l) {
  const int n = l.rows();
  CMat inv(n, n);
  for (int j = 0; j < n; ++j) {
    inv(j, j) = cd(1.0, 0.0) / l(j, j);
    for (int i = j + 1; i < n; ++i) {
      cd acc(0.0, 0.0);
      for (int p = j; p < i; ++p) {
        acc += l(i, p) * inv(p, j);
      }
      inv(i, j) = -acc / l(i, i);
    }
  }
  return inv;
}

CMat whitening_matrix(const CMat& cov) {
  return lower_triangular_inverse(cholesky_lower(cov));
}

std::vector<double> hermitian_inverse_diagonal(const CMat& a) {
  const CMat linv = lower_triangular_inverse(cholesky_lower(a));
  // inv(a) = linv^H * linv, so diag(inv(a))_i is the squared column norm
  // of linv at column i.
  const int n = a.rows();
  std::vector<double> diag(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = j; i < n; ++i) {
      acc += std::norm(linv(i, j));
    }
    diag[j] = acc;
  }
  return diag;
}

}  // namespace pdolink
