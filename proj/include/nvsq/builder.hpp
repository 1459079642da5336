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

#include <complex>
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "nvsq/model.hpp"

namespace nvsq {

/// Linear Gaussian model: d⟨r⟩/dt = F⟨r⟩, dσ/dt = Fσ + σFᵀ + D in the
/// quadrature basis of `layout`.
struct LinearModel {
  ModeLayout layout;
  Eigen::MatrixXd drift;
  Eigen::MatrixXd diffusion;
  std::string description;
};

/// Block-diagonal ⊕[[0, 1], [−1, 0]].
Eigen::MatrixXd symplectic_form(std::size_t n_modes);

/// Collects linear Heisenberg equations ċ_k = Σ_l (M_kl c_l + N_kl c_l†)
/// and turns them into the real quadrature drift.
class LadderEquations {
 public:
  explicit LadderEquations(std::size_t n_modes);

  /// ċ_k += coef · c_l
  void add(std::size_t k, std::size_t l, std::complex<double> coef);
  /// ċ_k += coef · c_l†
  void add_conj(std::size_t k, std::size_t l, std::complex<double> coef);

  Eigen::MatrixXd quadrature_drift() const;

 private:
  Eigen::MatrixXcd direct_;
  Eigen::MatrixXcd conj_;
};

/// Four-mode model (c1, c2, a, b) in the frame rotating at Δ_B1:
///   ċ1 = −ig a
///   ċ2 = −iΔ c2 − ig b†
///   ȧ  = iω a − ig c1 − iv b − (κ/2) a
///   ḃ  = iω b − ig c2† − iv a − (κ/2) b
/// with thermal diffusion κ(2n̄+1)/2 on both mechanical quadrature pairs.
LinearModel build_full_model(const SystemParams& p);

/// Two-mode model of H = A c1†c1 + (A+Δ) c2†c2 + B(c1c2 + c1†c2†).
/// Lossless. Throws ResonanceError at |ω| = v.
LinearModel build_effective_model(const SystemParams& p);
LinearModel build_effective_model(const EffectiveParams& e);

/// Pure pair-creation model H = B(c1c2 + c1†c2†), which is what remains of
/// the effective model at Δ = −2A once the conserved A(c1†c1 − c2†c2) is
/// removed.
LinearModel build_squeeze_model(const SystemParams& p);

/// Full model rewritten in the phonon normal modes ã = (a+b)/√2,
/// b̃ = (a−b)/√2.
struct NormalModeModel {
  LinearModel model;
  /// Orthogonal quadrature map: r_normal = basis · r_original.
  Eigen::MatrixXd basis;
  /// Lab-frame normal-mode frequencies ω_m + v and ω_m − v (rad/s).
  double frequency_plus = 0.0;
  double frequency_minus = 0.0;
  /// Spin coupling of each normal mode, g/√2 (rad/s).
  double coupling = 0.0;
};

NormalModeModel normal_mode_transform(const SystemParams& p);

struct AdiabaticityReport {
  static constexpr double kThreshold = 0.1;

  double g_over_sum = 0.0;       // g/|ω+v|
  double g_over_diff = 0.0;      // g/|ω−v|
  double kappa_over_sum = 0.0;   // κ/|ω+v|
  double kappa_over_diff = 0.0;  // κ/|ω−v|
  double worst = 0.0;
  bool adiabatic = true;
};

AdiabaticityReport adiabaticity_report(const SystemParams& p);

}  // namespace nvsq
