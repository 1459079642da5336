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

#include <cstdlib>
#include <string>

#include "nvsq/kernels.hpp"

namespace nvsq::simd {

#ifndef NVSQ_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#ifndef NVSQ_HAVE_NEON
const KernelTable* neon_kernels() { return nullptr; }
#endif

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(NVSQ_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(NVSQ_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (const auto* t = avx2_kernels(); t != nullptr && cpu_supports(Isa::Avx2)) out.push_back(t);
  if (const auto* t = neon_kernels(); t != nullptr && cpu_supports(Isa::Neon)) out.push_back(t);
  return out;
}

namespace {

const KernelTable& select() {
  const auto tables = available_kernels();
  if (const char* forced = std::getenv("NVSQ_SIMD")) {
    const std::string want(forced);
    for (const auto* t : tables) {
      if (to_string(t->isa) == want) return *t;
    }
    return scalar_kernels();
  }
  return *tables.back();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace nvsq::simd
