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

// NEON variants for aarch64 (one complex amplitude per 128-bit register).

#include <arm_neon.h>

#include <cmath>

#include "nvsq/kernels.hpp"

namespace nvsq::simd {

namespace {

void dia_real(double* y, const double* x, const double* w, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) vst1q_f64(y + k, vfmaq_f64(vld1q_f64(y + k), vld1q_f64(w + k), vld1q_f64(x + k)));
  for (; k < n; ++k) y[k] = std::fma(w[k], x[k], y[k]);
}

void dia_swap(double* y, const double* x, const double* w, std::size_t n) {
  for (std::size_t k = 0; k + 2 <= n; k += 2) {
    const float64x2_t xv = vld1q_f64(x + k);
    vst1q_f64(y + k, vfmaq_f64(vld1q_f64(y + k), vld1q_f64(w + k), vextq_f64(xv, xv, 1)));
  }
}

void axpy(double* y, double a, const double* x, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) vst1q_f64(y + k, vfmaq_n_f64(vld1q_f64(y + k), vld1q_f64(x + k), a));
  for (; k < n; ++k) y[k] = std::fma(a, x[k], y[k]);
}

void waxpy(double* out, const double* x, double a, const double* y, std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) vst1q_f64(out + k, vfmaq_n_f64(vld1q_f64(x + k), vld1q_f64(y + k), a));
  for (; k < n; ++k) out[k] = std::fma(a, y[k], x[k]);
}

double dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) acc = vfmaq_f64(acc, vld1q_f64(a + k), vld1q_f64(b + k));
  double s = vaddvq_f64(acc);
  for (; k < n; ++k) s += a[k] * b[k];
  return s;
}

double cross(const double* a, const double* b, std::size_t n) {
  const float64x2_t sign = {1.0, -1.0};
  float64x2_t acc = vdupq_n_f64(0.0);
  for (std::size_t k = 0; k + 2 <= n; k += 2) {
    const float64x2_t bv = vld1q_f64(b + k);
    acc = vfmaq_f64(acc, vmulq_f64(vld1q_f64(a + k), sign), vextq_f64(bv, bv, 1));
  }
  return vaddvq_f64(acc);
}

constexpr KernelTable kNeon{Isa::Neon, dia_real, dia_swap, axpy, waxpy, dot, cross};

}  // namespace

const KernelTable* neon_kernels() { return &kNeon; }

}  // namespace nvsq::simd
