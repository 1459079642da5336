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

/// Brute-force reference engine: exact evolution in a truncated Fock basis
/// of the post-Holstein-Primakoff bosonic model. Shares no code with the
/// Gaussian engine apart from the observable extraction.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nvsq/analytic.hpp"
#include "nvsq/dynamics.hpp"
#include "nvsq/kernels.hpp"
#include "nvsq/model.hpp"
#include "nvsq/observables.hpp"

namespace nvsq::fock {

/// Which bilinear Hamiltonian to evolve.
enum class HamiltonianSource {
  FullEqual,         // c1, c2, a, b with Δ_B1 = Δ_B2
  FullUnequal,       // c1, c2, a, b with Δ = Δ_B1 − Δ_B2
  EffectiveEqual,    // A(c1†c1 + c2†c2) + B(c1c2 + h.c.)
  EffectiveUnequal,  // A c1†c1 + (A+Δ) c2†c2 + B(c1c2 + h.c.)
  PureSqueeze,       // B(c1c2 + h.c.)
};

std::string_view to_string(HamiltonianSource s);
HamiltonianSource parse_source(std::string_view name);
std::size_t mode_count(HamiltonianSource s);

inline constexpr std::size_t kMaxStateAmplitudes = 4'000'000;
inline constexpr std::size_t kMaxDensityEntries = 40'000;

struct FockConfig {
  std::vector<int> cutoffs;
  HamiltonianSource source = HamiltonianSource::EffectiveEqual;
  /// Lindblad damping of the mechanical modes (density-matrix path).
  bool dissipation = false;
  /// RK4 step in seconds; 0 selects 1/(50·spectral bound of H).
  double integrator_step = 0.0;
  /// Largest tolerated population of the truncation boundary.
  double boundary_tolerance = 1e-6;
  /// Repeat at half step and report the difference.
  bool richardson_check = true;
  /// Kernel variant; active_kernels() when unset.
  std::optional<simd::Isa> isa;
};

/// A Hermitian or Liouvillian operator stored as shifted diagonals over the
/// interleaved state vector.
struct DiaOperator {
  struct Diagonal {
    std::int64_t offset = 0;     // in complex elements
    std::size_t begin = 0;       // first output index with a non-zero coefficient
    std::size_t end = 0;         // one past the last
    bool swap = false;           // true: coefficient multiplies i·x
    std::vector<double> weights; // interleaved, length 2·(end − begin)
  };

  std::size_t dimension = 0;
  std::vector<Diagonal> diagonals;

  /// y += Op·x using the given kernels.
  void apply_add(const simd::KernelTable& k, const double* x, double* y) const;
  /// Gershgorin bound on the spectral radius (rad/s).
  double spectral_bound() const;
};

/// Bilinear Hamiltonian as a list of real-coefficient terms.
struct Term {
  enum class Kind { Number, Hopping, Pair };
  Kind kind;
  std::size_t k;
  std::size_t l;
  double coef;
};

std::vector<Term> hamiltonian_terms(const SystemParams& p, HamiltonianSource s);

/// Truncated Fock basis over several modes (row-major, last mode fastest).
class FockBasis {
 public:
  explicit FockBasis(std::vector<int> cutoffs);

  std::size_t dimension() const { return dimension_; }
  std::size_t modes() const { return cutoffs_.size(); }
  int cutoff(std::size_t k) const { return cutoffs_[k]; }
  std::size_t stride(std::size_t k) const { return strides_[k]; }
  int occupation(std::size_t index, std::size_t k) const;
  bool on_boundary(std::size_t index) const;

 private:
  std::vector<int> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t dimension_ = 1;
};

/// −iH as a DIA operator on state vectors.
DiaOperator schrodinger_generator(const FockBasis& basis, const std::vector<Term>& terms);

/// Lindblad generator on row-major vec(ρ): −i[H, ρ] plus thermal damping
/// at rate κ on the listed mechanical modes.
DiaOperator lindblad_generator(const FockBasis& basis, const std::vector<Term>& terms,
                               const std::vector<std::size_t>& damped_modes, double kappa,
                               double n_th);

struct FockRun {
  std::vector<MomentState> moments;
  SqueezingTrace trace;
  /// ⟨c1†c1 − c2†c2⟩ per sample.
  std::vector<double> number_difference;
  /// max |‖ψ‖² − 1| or max |Tr ρ − 1| over the samples.
  double norm_drift = 0.0;
  double max_boundary_population = 0.0;
  double step = 0.0;
  std::optional<double> richardson_error;
  simd::Isa isa = simd::Isa::Scalar;
  std::vector<std::string> warnings;
};

/// Evolves the vacuum with RK4 (Schrödinger, or Lindblad when
/// cfg.dissipation) and extracts all first and second moments.
/// Throws CutoffOverflowError, ParameterError.
FockRun evolve_fock(const SystemParams& p, const FockConfig& cfg, double t_end, int n_samples,
                    const TraceSettings& settings = {});

/// Decides between sin²(λt) and sin²(2λt) by locating the first variance
/// minimum of the Fock evolution of the equal-splitting effective model.
/// Throws InconclusiveError when neither prediction is within 5 %.
struct Adjudication {
  analytic::OscillationConvention convention;
  double observed_time = 0.0;
  double predicted_lambda_t = 0.0;
  double predicted_two_lambda_t = 0.0;
};

Adjudication adjudicate_convention(const SystemParams& p, int cutoff = 12);

}  // namespace nvsq::fock
