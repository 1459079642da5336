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

/// Doubly clamped diamond beam: coupling, fundamental frequency, damping and
/// thermal occupation estimates.

#include <cstdint>
#include <string>
#include <vector>

namespace nvsq::device {

inline constexpr double kHbar = 1.054571817e-34;      // J·s
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K
inline constexpr double kDiamondDensity = 3500.0;     // kg/m³
inline constexpr double kDiamondYoungs = 1.05e12;     // Pa
/// Prefactor of the surface strain coupling g/2π ≃ 180 GHz·√(ħ/(L³w√(ρE))).
inline constexpr double kCouplingPrefactorHz = 180e9;
/// β₁L of the first clamped-clamped flexural mode.
inline constexpr double kClampedBetaL = 4.730040744862704;
/// Damping rate commonly quoted for Q = 10⁶ devices at 10 mK, used by the
/// robustness runs alongside the ω_m/Q value.
inline constexpr double kReferenceKappaHz = 1e3;
/// Mechanical frequency the reference parameter set assumes.
inline constexpr double kReferenceMechHz = 2e9;

struct BeamGeometry {
  double length = 0.5e-6;  // m
  double width = 0.05e-6;  // m
  double height = 0.05e-6; // m
  double density = kDiamondDensity;
  double youngs_modulus = kDiamondYoungs;
  double quality_factor = 1e6;
  double temperature = 10e-3;  // K
};

/// Throws ParameterError on non-positive fields; returns the slender-beam
/// advisory when L < 5·max(w, h).
std::vector<std::string> check_geometry(const BeamGeometry& g);

/// Single-NV coupling (rad/s).
double estimate_coupling(const BeamGeometry& g);
/// √N times the single-NV coupling (rad/s).
double collective_coupling(const BeamGeometry& g, std::int64_t n_spins);

/// f₁ = (β₁²/2π)·√(EI/(ρwh))/L², I = wh³/12; returned as 2π·f₁.
double estimate_mech_frequency(const BeamGeometry& g);

/// Bose occupation 1/(exp(ħω/k_BT) − 1).
double bose_occupation(double omega, double temperature);

struct ThermalDamping {
  double kappa = 0.0;  // ω_m/Q (rad/s)
  double n_th = 0.0;
};

ThermalDamping thermal_and_damping(const BeamGeometry& g, double omega_m);

struct DeviceReport {
  BeamGeometry geometry;
  std::int64_t n_spins = 100;
  double g_single = 0.0;
  double g_collective = 0.0;
  double omega_m = 0.0;
  double kappa = 0.0;
  double n_th = 0.0;
  /// Damping quoted for the reference set (1 kHz).
  double kappa_reference = 0.0;
  /// ω_m/Q and the Bose factor at the reference 2 GHz instead of the beam estimate.
  double kappa_at_reference_mech = 0.0;
  double n_th_at_reference_mech = 0.0;
  std::vector<std::string> warnings;
};

DeviceReport device_report(const BeamGeometry& g, std::int64_t n_spins);

}  // namespace nvsq::device
