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

#include <stdexcept>

#include "pdolink/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define PDOLINK_HAVE_AVX2_TU 1
#include <immintrin.h>
#else
#define PDOLINK_HAVE_AVX2_TU 0
#endif

namespace pdolink::kern {

#if PDOLINK_HAVE_AVX2_TU

namespace {

// Complex multiply-accumulate of two interleaved complex lanes:
// acc += (ar + j*ai) * b, with ar/ai broadcast and b = (b0r, b0i, b1r, b1i).
inline __m256d cmla2(__m256d acc, __m256d ar, __m256d ai, __m256d b) {
  const __m256d bsw = _mm256_permute_pd(b, 0x5);  // (b0i, b0r, b1i, b1r)
  const __m256d t = _mm256_mul_pd(bsw, ai);
  return _mm256_add_pd(acc, _mm256_fmaddsub_pd(b, ar, t));
}

void cmatmul_avx2(const cd* a, int m, int k, const cd* b, int n, cd* c) {
  const auto* bd = reinterpret_cast<const double*>(b);
  auto* cdst = reinterpret_cast<double*>(c);
  const int n2 = n / 2;
  const bool tail = (n & 1) != 0;
  for (int i = 0; i < m; ++i) {
    for (int jb = 0; jb < n2; ++jb) {
      __m256d acc = _mm256_setzero_pd();
      for (int l = 0; l < k; ++l) {
        const cd ail = a[i * k + l];
        const __m256d ar = _mm256_set1_pd(ail.real());
        const __m256d ai = _mm256_set1_pd(ail.imag());
        const __m256d bv = _mm256_loadu_pd(bd + 2 * (l * n + 2 * jb));
        acc = cmla2(acc, ar, ai, bv);
      }
      _mm256_storeu_pd(cdst + 2 * (i * n + 2 * jb), acc);
    }
    if (tail) {
      const int j = n - 1;
      cd acc(0.0, 0.0);
      for (int l = 0; l < k; ++l) {
        acc += a[i * k + l] * b[l * n + j];
      }
      c[i * n + j] = acc;
    }
  }
}

void cgram_avx2(const cd* a, int m, int k, cd* c) {
  const auto* ad = reinterpret_cast<const double*>(a);
  auto* cdst = reinterpret_cast<double*>(c);
  const int k2 = k / 2;
  const bool tail = (k & 1) != 0;
  for (int i = 0; i < k; ++i) {
    for (int jb = 0; jb < k2; ++jb) {
      __m256d acc = _mm256_setzero_pd();
      for (int l = 0; l < m; ++l) {
        const cd ali = a[l * k + i];
        const __m256d ar = _mm256_set1_pd(ali.real());
        const __m256d ai = _mm256_set1_pd(-ali.imag());
        const __m256d av = _mm256_loadu_pd(ad + 2 * (l * k + 2 * jb));
        acc = cmla2(acc, ar, ai, av);
      }
      _mm256_storeu_pd(cdst + 2 * (i * k + 2 * jb), acc);
    }
    if (tail) {
      const int j = k - 1;
      cd acc(0.0, 0.0);
      for (int l = 0; l < m; ++l) {
        acc += std::conj(a[l * k + i]) * a[l * k + j];
      }
      c[i * k + j] = acc;
    }
  }
}

void caxpy_avx2(cd alpha, const cd* x, cd* y, int n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const auto* xd = reinterpret_cast<const double*>(x);
  auto* yd = reinterpret_cast<double*>(y);
  int i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, cmla2(yv, ar, ai, xv));
  }
  for (; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

// Vectorized sin/cos for four doubles, cephes style. Arguments are reduced
// to [-pi/4, pi/4] with a three part pi/2 so the polynomial error stays near
// 1 ulp for |x| up to about 1e8.
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050650619224932e-11;
constexpr double kPio2Lo = 2.02226624879595063154e-21;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;

inline void sincos4(__m256d x, __m256d* s, __m256d* c) {
  const __m256d qd = _mm256_round_pd(
      _mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m128i qi = _mm256_cvtpd_epi32(qd);

  __m256d r = _mm256_fnmadd_pd(qd, _mm256_set1_pd(kPio2Hi), x);
  r = _mm256_fnmadd_pd(qd, _mm256_set1_pd(kPio2Mid), r);
  r = _mm256_fnmadd_pd(qd, _mm256_set1_pd(kPio2Lo), r);

  const __m256d z = _mm256_mul_pd(r, r);

  __m256d ps = _mm256_set1_pd(1.58962301576546568060e-10);
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-2.50507477628578072866e-8));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(2.75573136213857245213e-6));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.98412698295895385996e-4));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(8.33333333332211858878e-3));
  ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(-1.66666666666666307295e-1));
  const __m256d sin_r =
      _mm256_fmadd_pd(_mm256_mul_pd(ps, z), r, r);

  __m256d pc = _mm256_set1_pd(-1.13585365213876817300e-11);
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.08757008419747316778e-9));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-2.75573141792967388112e-7));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(2.48015872888517179954e-5));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(-1.38888888888730564116e-3));
  pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(4.16666666666665929218e-2));
  __m256d cos_r = _mm256_mul_pd(_mm256_mul_pd(pc, z), z);
  cos_r = _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5), _mm256_add_pd(
              cos_r, _mm256_set1_pd(1.0)));

  // Quadrant fixup: q&1 swaps sin/cos, q&2 negates sin, (q+1)&2 negates cos.
  const __m256i q64 = _mm256_cvtepi32_epi64(qi);
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap_mask = _mm256_castsi256_pd(_mm256_cmpeq_epi64(
      _mm256_and_si256(q64, one), one));
  const __m256d sin_neg = _mm256_castsi256_pd(_mm256_slli_epi64(
      _mm256_and_si256(q64, two), 62));
  const __m256d cos_neg = _mm256_castsi256_pd(_mm256_slli_epi64(
      _mm256_and_si256(_mm256_add_epi64(q64, one), two), 62));

  const __m256d s_sel = _mm256_blendv_pd(sin_r, cos_r, swap_mask);
  const __m256d c_sel = _mm256_blendv_pd(cos_r, sin_r, swap_mask);
  *s = _mm256_xor_pd(s_sel, sin_neg);
  *c = _mm256_xor_pd(c_sel, cos_neg);
}

cd cis_sum_avx2(const double* omega, const double* phi, int n, double t) {
  __m256d re_acc = _mm256_setzero_pd();
  __m256d im_acc = _mm256_setzero_pd();
  const __m256d tv = _mm256_set1_pd(t);
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d w = _mm256_loadu_pd(omega + i);
    const __m256d p = _mm256_loadu_pd(phi + i);
    // mul + add (not fmadd) so the rounding of omega*t + phi matches the
    // scalar backend exactly; the TU is built with -ffp-contract=off.
    const __m256d ph = _mm256_add_pd(_mm256_mul_pd(w, tv), p);
    __m256d s, c;
    sincos4(ph, &s, &c);
    re_acc = _mm256_add_pd(re_acc, c);
    im_acc = _mm256_add_pd(im_acc, s);
  }
  alignas(32) double rbuf[4];
  alignas(32) double ibuf[4];
  _mm256_store_pd(rbuf, re_acc);
  _mm256_store_pd(ibuf, im_acc);
  double re = (rbuf[0] + rbuf[1]) + (rbuf[2] + rbuf[3]);
  double im = (ibuf[0] + ibuf[1]) + (ibuf[2] + ibuf[3]);
  for (; i < n; ++i) {
    const double ph = omega[i] * t + phi[i];
    re += std::cos(ph);
    im += std::sin(ph);
  }
  return cd(re, im);
}

}  // namespace

bool avx2_available() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Backend& avx2_backend() {
  if (!avx2_available()) {
    throw std::runtime_error("AVX2 backend requested on a CPU without AVX2");
  }
  static const Backend backend = {
      "avx2", cmatmul_avx2, cgram_avx2, caxpy_avx2, cis_sum_avx2,
  };
  return backend;
}

#else  // !PDOLINK_HAVE_AVX2_TU

bool avx2_available() { return false; }

const Backend& avx2_backend() {
  throw std::runtime_error("AVX2 backend not built for this architecture");
}

#endif

}  // namespace pdolink::kern
