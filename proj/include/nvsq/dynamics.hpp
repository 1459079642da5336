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
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nvsq/builder.hpp"

namespace nvsq {

/// First and second moments of all quadratures at one instant.
/// cov(i, j) = ⟨{Δr_i, Δr_j}⟩/2.
struct MomentState {
  double time = 0.0;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Ground state of every mode: zero mean, covariance I/2.
MomentState vacuum_state(const ModeLayout& layout);

/// Smallest eigenvalue of the Hermitian matrix σ + iΩ/2. Non-negative for
/// every physical state, zero for pure states.
double min_uncertainty_eigenvalue(const Eigen::MatrixXd& cov);

/// Symplectic eigenvalues of σ in ascending order (each ≥ 1/2).
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov);

/// Exact one-step map of the moment equations over a fixed dt:
/// mean → transfer·mean, cov → transfer·cov·transferᵀ + noise.
struct Propagator {
  double dt = 0.0;
  Eigen::MatrixXd transfer;
  Eigen::MatrixXd noise;
};

/// Exponentiates the augmented generator [[F, D], [0, −Fᵀ]]·dt; its blocks
/// give exp(F·dt) and ∫₀^dt exp(Fs) D exp(Fs)ᵀ ds without ODE error.
Propagator make_propagator(const LinearModel& model, double dt);
MomentState apply(const Propagator& prop, const MomentState& s);

/// Throws NumericError on non-finite results.
MomentState propagate_exact(const LinearModel& model, const MomentState& s0, double t);

enum class Integrator { Exact, Rk4 };

struct TraceOptions {
  Integrator integrator = Integrator::Exact;
  /// Stop once any spin mode holds more excitations than this.
  std::optional<double> excitation_cap;
};

struct Trajectory {
  std::vector<MomentState> states;
  std::string description;
  Integrator integrator = Integrator::Exact;
  /// Internal step: the sample spacing for Exact, the RK4 substep otherwise.
  double step = 0.0;
  bool truncated = false;
  std::optional<double> truncated_at;
};

/// Samples t = k·t_end/(n_samples−1), k = 0..n_samples−1.
Trajectory propagate_trace(const LinearModel& model, const MomentState& s0, double t_end,
                           int n_samples, const TraceOptions& opts = {});

/// Largest |eigenvalue| of the drift (rad/s).
double max_drift_frequency(const Eigen::MatrixXd& drift);

}  // namespace nvsq
