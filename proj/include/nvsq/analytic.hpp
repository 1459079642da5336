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

/// Closed-form results for the eliminated two-mode model. These are
/// reference implementations; the numerical engines are checked against
/// them and never call into them.

#include <complex>
#include <string_view>

#include "nvsq/model.hpp"

namespace nvsq::analytic {

/// Argument of the oscillating factor: sin²(λt) or sin²(2λt).
enum class OscillationConvention { LambdaT, TwoLambdaT };

std::string_view to_string(OscillationConvention c);

/// V(X_{c1c2}(0)) for equal Zeeman splitting, vacuum start:
/// ¼[1 − 2B/(A+B)·sin²(arg)], with 2B/(A+B) = 2v/(ω+v).
/// Throws DomainError unless λ is real and non-zero and Δ = 0.
double variance_equal_splitting(const SystemParams& p, double t,
                                OscillationConvention conv = OscillationConvention::LambdaT);

/// Lowest value reached by the variance above: ¼(ω−v)/(ω+v).
double envelope_minimum(const SystemParams& p);

/// ⟨c1†c1⟩ = ⟨c2†c2⟩ = (B/λ)² sin²(λt).
double excitation_equal_splitting(const SystemParams& p, double t);

enum class Regime { Oscillatory, Exponential, Boundary };

std::string_view to_string(Regime r);

/// Oscillatory iff |Δ + 2A| > 2|B|, Exponential iff below, Boundary
/// within a relative 1e-9 band.
Regime classify_regime(const EffectiveParams& e);
Regime classify_regime(const SystemParams& p);

struct ExponentialCase {
  double v_min = 0.25;
  double v_max = 0.25;
  double excitation = 0.0;
};

/// Δ = −2A pair creation: squeezed ¼e^{−2Bt}, anti-squeezed ¼e^{2Bt} on the
/// modes rotated by e^{iπ/4}, sinh²(Bt) excitations per ensemble.
ExponentialCase exponential_case(const SystemParams& p, double t);

struct NuCoefficients {
  std::complex<double> nu1;
  std::complex<double> nu2;
};

/// ν₁ = cos(λt) − i(A/λ)sin(λt), ν₂ = i(B/λ)sin(λt).
/// Throws DegenerateError at λ = 0.
NuCoefficients propagator_coefficients(const SystemParams& p, double t);
NuCoefficients propagator_coefficients(const EffectiveParams& e, double t);

/// Non-vanishing second moments of the evolved vacuum, assembled from ν₁, ν₂.
struct SecondMoments {
  std::complex<double> c1c2;          // ⟨c1c2⟩ = −ν₁ν₂
  std::complex<double> c1c1dag;       // ⟨c1c1†⟩ = |ν₁|²
  std::complex<double> c1dagc1;       // ⟨c1†c1⟩ = −ν₂²
  std::complex<double> c1dagc2dag;    // ⟨c1†c2†⟩ = ν₂ν₁*
};

SecondMoments second_moments(const NuCoefficients& nu);

/// V(X(0)) = ¼(⟨c1c1†⟩ + ⟨c2†c2⟩ + ⟨c1c2⟩ + ⟨c1†c2†⟩), using the ensemble
/// symmetry ⟨c2†c2⟩ = ⟨c1†c1⟩.
double variance_from_moments(const SecondMoments& m);

/// First time the equal-splitting variance reaches its minimum:
/// π/(2λ) for LambdaT, π/(4λ) for TwoLambdaT.
/// Throws RegimeError unless Δ = 0 and the regime is oscillatory.
double first_minimum_time(const SystemParams& p,
                          OscillationConvention conv = OscillationConvention::LambdaT);

}  // namespace nvsq::analytic
