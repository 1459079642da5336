// Copyright 2026 The nvsqueeze Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2 + FMA variants. This translation unit is the only one compiled with
// -mavx2 -mfma; callers reach it through the dispatch table after a CPUID
// check.

#include <immintrin.h>

#include <cmath>

#include "nvsq/kernels.hpp"

namespace nvsq::simd {

namespace {

double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

void dia_real(double* y, const double* x, const double* w, std::size_t n) {
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256d y0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k));
    const __m256d y1 =
        _mm256_fmadd_pd(_mm256_loadu_pd(w + k + 4), _mm256_loadu_pd(x + k + 4), _mm256_loadu_pd(y + k + 4));
    _mm256_storeu_pd(y + k, y0);
    _mm256_storeu_pd(y + k + 4, y1);
  }
  for (; k + 4 <= n; k += 4)
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  for (; k < n; ++k) y[k] = std::fma(w[k], x[k], y[k]);
}

void dia_swap(double* y, const double* x, const double* w, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d xs = _mm256_permute_pd(_mm256_loadu_pd(x + k), 0b0101);
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(_mm256_loadu_pd(w + k), xs, _mm256_loadu_pd(y + k)));
  }
  for (; k + 1 < n; k += 2) {
    y[k] = std::fma(w[k], x[k + 1], y[k]);
    y[k + 1] = std::fma(w[k + 1], x[k], y[k + 1]);
  }
}

void axpy(double* y, double a, const double* x, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  for (; k < n; ++k) y[k] = std::fma(a, x[k], y[k]);
}

void waxpy(double* out, const double* x, double a, const double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    _mm256_storeu_pd(out + k, _mm256_fmadd_pd(av, _mm256_loadu_pd(y + k), _mm256_loadu_pd(x + k)));
  for (; k < n; ++k) out[k] = std::fma(a, y[k], x[k]);
}

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

double cross(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d bs = _mm256_permute_pd(_mm256_loadu_pd(b + k), 0b0101);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(a + k), sign), bs, acc);
  }
  double s = hsum(acc);
  for (; k + 1 < n; k += 2) s += a[k] * b[k + 1] - a[k + 1] * b[k];
  return s;
}

constexpr KernelTable kAvx2{Isa::Avx2, dia_real, dia_swap, axpy, waxpy, dot, cross};

}  // namespace

const KernelTable* avx2_kernels() { return &kAvx2; }

}  // namespace nvsq::simd
