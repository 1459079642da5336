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

/// Physical parameter sets, unit conventions and the mode layout shared by
/// the rest of the library.
///
/// Every rate is stored as an angular frequency in rad/s. Configuration and
/// reports use ordinary frequency (Hz); convert with from_hz / to_hz at the
/// boundary.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nvsq {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

constexpr double from_hz(double f) { return kTwoPi * f; }
constexpr double to_hz(double w) { return w / kTwoPi; }

/// Relative tolerance of the |ω| = v resonance guard.
inline constexpr double kResonanceTolerance = 1e-9;

/// Rates of the two-ensemble, two-resonator model (all rad/s).
///
/// `g_collective` already carries the √N enhancement; `n_spins` is only
/// used to judge Holstein-Primakoff validity.
struct SystemParams {
  double omega_m = 0.0;
  double delta_b1 = 0.0;
  double delta_b2 = 0.0;
  double g_collective = 0.0;
  double v = 0.0;
  std::int64_t n_spins = 100;
  double kappa = 0.0;
  double n_th = 0.0;

  /// ω = Δ_B1 − ω_m, the spin-phonon detuning in the rotating frame.
  double detuning() const { return delta_b1 - omega_m; }
  /// Δ = Δ_B1 − Δ_B2.
  double zeeman_offset() const { return delta_b1 - delta_b2; }

  bool operator==(const SystemParams&) const = default;
};

/// Throws ParameterError when a field violates its invariants.
void check_params(const SystemParams& p);

/// Convenience description of a parameter point in the units the
/// experiments are usually quoted in.
struct RatioSpec {
  double g_hz = 40e3;
  double v_hz = 1e6;
  double omega_over_v = 2.0;
  /// Zeeman offset Δ in units of the eliminated coefficient A.
  double delta_over_a = 0.0;
  double omega_m_hz = 2e9;
  std::int64_t n_spins = 100;
  double kappa_hz = 0.0;
  double n_th = 0.0;
};

SystemParams from_ratios(const RatioSpec& r);

/// Returns p with Δ_B1 moved so that ω = ratio·v (Δ is kept).
SystemParams with_detuning_ratio(SystemParams p, double ratio);
/// Returns p with Δ_B2 moved so that Δ = ratio·A.
SystemParams with_zeeman_offset_ratio(SystemParams p, double ratio);

enum class ModeKind { Spin, Mechanical };

struct Mode {
  std::string label;
  ModeKind kind;
};

/// Ordered bosonic modes. Mode k owns quadratures (2k, 2k+1) with
/// x = (c + c†)/√2, p = −i(c − c†)/√2, so the vacuum covariance is I/2.
class ModeLayout {
 public:
  explicit ModeLayout(std::vector<Mode> modes);

  /// c1, c2, a, b
  static ModeLayout full();
  /// c1, c2
  static ModeLayout spins();

  std::size_t size() const { return modes_.size(); }
  std::size_t dim() const { return 2 * modes_.size(); }
  const Mode& mode(std::size_t k) const;
  std::span<const Mode> modes() const { return modes_; }
  std::size_t index(std::string_view label) const;
  bool contains(std::string_view label) const;

  static constexpr std::size_t x(std::size_t k) { return 2 * k; }
  static constexpr std::size_t p(std::size_t k) { return 2 * k + 1; }

  bool operator==(const ModeLayout&) const;

 private:
  std::vector<Mode> modes_;
};

/// Coefficients of the adiabatically eliminated two-mode model.
struct EffectiveParams {
  double a_coef = 0.0;
  double b_coef = 0.0;
  std::complex<double> lambda{};
  double delta = 0.0;

  bool lambda_is_real() const { return lambda.imag() == 0.0; }
};

/// A = ωg²/(ω²−v²), B = vg²/(ω²−v²), λ = √(A²−B²), Δ = Δ_B1 − Δ_B2.
/// Throws ResonanceError when |ω| = v within kResonanceTolerance.
EffectiveParams effective_params(const SystemParams& p);

/// Builds EffectiveParams directly from A, B, Δ.
EffectiveParams make_effective(double a_coef, double b_coef, double delta);

struct Warning {
  std::string code;
  std::string message;
};

/// Advisory checks: adiabaticity, damping vs. coupling, thermal occupation.
std::vector<Warning> validate(const SystemParams& p);

}  // namespace nvsq
