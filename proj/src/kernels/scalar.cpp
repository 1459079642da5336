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

// Reference kernels. Element-wise updates use std::fma so that the FMA-based
// vector variants reproduce them bit for bit; only the reductions may differ
// in the last bits.

#include <cmath>

#include "nvsq/kernels.hpp"

namespace nvsq::simd {

namespace {

void dia_real(double* y, const double* x, const double* w, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] = std::fma(w[k], x[k], y[k]);
}

void dia_swap(double* y, const double* x, const double* w, std::size_t n) {
  for (std::size_t k = 0; k + 1 < n; k += 2) {
    y[k] = std::fma(w[k], x[k + 1], y[k]);
    y[k + 1] = std::fma(w[k + 1], x[k], y[k + 1]);
  }
}

void axpy(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] = std::fma(a, x[k], y[k]);
}

void waxpy(double* out, const double* x, double a, const double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = std::fma(a, y[k], x[k]);
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

double cross(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < n; k += 2) s += a[k] * b[k + 1] - a[k + 1] * b[k];
  return s;
}

constexpr KernelTable kScalar{Isa::Scalar, dia_real, dia_swap, axpy, waxpy, dot, cross};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace nvsq::simd
