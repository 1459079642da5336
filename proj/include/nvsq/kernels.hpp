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

#pragma once

/// Data-parallel inner loops of the Fock oracle.
///
/// Complex vectors are stored interleaved (re, im) as doubles. A sparse
/// operator is held as shifted diagonals whose coefficients are expanded to
/// the same interleaved length, so every kernel here is a plain loop over
/// doubles. The scalar table is the reference; AVX2 (x86-64) and NEON
/// (aarch64) variants are picked at runtime and must agree with it.

#include <cstddef>
#include <string_view>
#include <vector>

namespace nvsq::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  /// y[k] += w[k]·x[k]
  void (*dia_real)(double* y, const double* x, const double* w, std::size_t n);
  /// y[k] += w[k]·x[k^1]  (n even; swaps re/im within each complex pair)
  void (*dia_swap)(double* y, const double* x, const double* w, std::size_t n);
  /// y[k] += a·x[k]
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  /// out[k] = x[k] + a·y[k]
  void (*waxpy)(double* out, const double* x, double a, const double* y, std::size_t n);
  /// Σ a[k]·b[k]
  double (*dot)(const double* a, const double* b, std::size_t n);
  /// Σ a[2m]·b[2m+1] − a[2m+1]·b[2m]  (imaginary part of ⟨a|b⟩)
  double (*cross)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_kernels();
/// nullptr when the variant was not compiled in.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

bool cpu_supports(Isa isa);

/// Compiled-in variants the running CPU can execute, scalar first.
std::vector<const KernelTable*> available_kernels();

/// Best available table. NVSQ_SIMD=scalar|avx2|neon in the environment
/// forces a specific one (falling back to scalar when unsupported).
const KernelTable& active_kernels();

}  // namespace nvsq::simd
