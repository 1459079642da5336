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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nvsq/builder.hpp"
#include "nvsq/dynamics.hpp"

namespace nvsq {

/// Variance of X(θ) = ½[cosθ(x_i + x_j) − sinθ(p_i + p_j)].
/// The vacuum gives 1/4.
double joint_quadrature_variance(const MomentState& s, std::size_t i, std::size_t j,
                                 double theta);
double joint_quadrature_variance(const MomentState& s, const ModeLayout& layout,
                                 std::string_view mode_i, std::string_view mode_j,
                                 double theta);

struct OptimalAngle {
  double theta = 0.0;  // in [0, π)
  double variance = 0.25;
};

/// Minimises the quadratic form V(θ) in closed form (2×2 eigenproblem on
/// the covariance of (x_i + x_j, p_i + p_j)).
OptimalAngle optimal_angle(const MomentState& s, std::size_t i, std::size_t j);

/// ⟨c†c⟩ = (σ_xx + σ_pp − 1)/2 + (⟨x⟩² + ⟨p⟩²)/2.
double mode_excitation(const MomentState& s, std::size_t k);

/// Applies c_k → e^{iφ} c_k to every listed mode.
MomentState rotate_modes(const MomentState& s, std::span<const std::size_t> modes, double phase);

/// V(X₊(θ)) + V(P₋(θ)) with X₊ = ½(x_i^θ + x_j^θ), P₋ = ½(p_i^θ − p_j^θ) and
/// x^θ = cosθ x − sinθ p, p^θ = sinθ x + cosθ p. Below ½ only for
/// entangled pairs.
double epr_witness(const MomentState& s, std::size_t i, std::size_t j, double theta);

inline constexpr double kDefaultHpFraction = 0.1;

/// Which pair to look at and how to judge Holstein-Primakoff validity.
struct TraceSettings {
  std::size_t mode_i = 0;
  std::size_t mode_j = 1;
  double theta = 0.0;
  /// Common phase applied to both modes before measuring (π/4 reproduces
  /// the rotated operators of the pure-squeeze case).
  double mode_phase = 0.0;
  double hp_fraction = kDefaultHpFraction;
  double n_spins = 100.0;
};

struct SqueezingTrace {
  std::vector<double> times;
  std::vector<double> variance_theta;
  std::vector<double> variance_opt;
  std::vector<double> theta_opt;
  /// occupations[k][t] = ⟨c_k†c_k⟩ for every mode of `layout`.
  std::vector<std::vector<double>> occupations;
  std::vector<bool> hp_valid;
  std::optional<double> first_violation;
  ModeLayout layout = ModeLayout::spins();
  TraceSettings settings;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  /// Largest spin-mode excitation at sample t.
  double max_spin_excitation(std::size_t t) const;
};

SqueezingTrace make_squeezing_trace(std::span<const MomentState> states, const ModeLayout& layout,
                                    const TraceSettings& settings);
SqueezingTrace make_squeezing_trace(const Trajectory& traj, const ModeLayout& layout,
                                    const TraceSettings& settings);

/// Recomputes the validity flags against hp_fraction·n_spins.
void hp_check(SqueezingTrace& trace, double n_spins, double hp_fraction = kDefaultHpFraction);

struct MinimumVariance {
  double time = 0.0;
  double variance = 0.25;
  double theta = 0.0;
  std::size_t sample = 0;
};

/// Lets find_min_variance re-propagate around the best grid sample.
struct Refinement {
  const LinearModel* model = nullptr;
  MomentState initial;
  double relative_tolerance = 1e-6;
};

/// Relative depth within which two variance minima count as equal.
inline constexpr double kMinimumTieTolerance = 1e-6;

/// Global minimum of variance_opt over the HP-valid samples, optionally
/// polished by golden-section search on exact re-propagation. Among minima
/// equal within kMinimumTieTolerance the earliest is returned.
/// Throws EmptyTraceError or HpInvalidError.
MinimumVariance find_min_variance(const SqueezingTrace& trace,
                                  const Refinement* refine = nullptr);

/// Convert a variance in vacuum-1/4 normalisation to dB relative to vacuum.
double to_decibel(double variance);

}  // namespace nvsq
