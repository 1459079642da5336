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
#include <string_view>
#include <vector>

#include "nvsq/builder.hpp"
#include "nvsq/fock.hpp"
#include "nvsq/model.hpp"
#include "nvsq/observables.hpp"

namespace nvsq {

enum class Engine { Gaussian, Fock };
enum class ModelKind { Full, Effective, Squeeze };

std::string_view to_string(Engine e);
std::string_view to_string(ModelKind m);
Engine parse_engine(std::string_view s);
ModelKind parse_model(std::string_view s);

/// Everything needed to evaluate one parameter point.
struct RunSettings {
  double horizon = 1e-3;  // s
  int samples = 1001;
  double theta = 0.0;
  double hp_fraction = kDefaultHpFraction;
  Engine engine = Engine::Gaussian;
  ModelKind model = ModelKind::Effective;
  /// Fock engine settings. The source follows `model`; empty cutoffs pick
  /// 12 per mode (6 for the full model). The full model switches to the
  /// density-matrix path when κ > 0.
  fock::FockConfig fock;
  /// Golden-section polishing of the minimum (Gaussian engine only).
  bool refine = true;
};

/// The squeeze-only model is measured on the e^{iπ/4}-rotated operators.
double default_mode_phase(ModelKind m);

LinearModel build_model(const SystemParams& p, ModelKind m);

struct PointResult {
  SqueezingTrace trace;
  MinimumVariance minimum;
  double peak_excitation = 0.0;
  bool truncated = false;
  /// Diagnostics of the Fock engine (its trace lives in `trace`).
  std::optional<fock::FockRun> fock;
};

/// Simulates one point and locates its HP-valid minimum.
PointResult evaluate_point(const SystemParams& p, const RunSettings& run);

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

/// Axis names understood by apply_axis / run_sweep.
std::vector<std::string_view> axis_names();

/// Sets the named quantity (omega_over_v, delta_over_a, g_hz, v_hz,
/// kappa_hz, n_th, horizon_s). Throws ParameterError for unknown names.
void apply_axis(SystemParams& p, RunSettings& run, std::string_view name, double value);

inline constexpr std::size_t kMaxSweepRuns = 100'000;

struct SweepSpec {
  SystemParams base;
  std::vector<SweepAxis> axes;
  RunSettings run;
  unsigned threads = 1;
};

struct SweepRow {
  std::vector<double> coords;
  std::string regime;
  double v_min = 0.0;
  double t_min = 0.0;
  double theta_opt = 0.0;
  double peak_excitation = 0.0;
  bool hp_valid = false;
  double g_over_sum = 0.0;
  double g_over_diff = 0.0;
  bool adiabatic = false;
  std::string error;
};

struct SweepTable {
  std::vector<std::string> axis_names;
  std::vector<SweepRow> rows;
};

/// Row-major over the axes (last axis fastest). Errors are recorded in the
/// row; the sweep itself only throws for an invalid spec.
SweepTable run_sweep(const SweepSpec& spec);

struct OptimizeBounds {
  double omega_over_v_lo = 2.0;
  double omega_over_v_hi = 2.0;
  double delta_over_a_lo = 0.0;
  double delta_over_a_hi = 0.0;
};

struct OptimizeSpec {
  SystemParams base;
  OptimizeBounds bounds;
  RunSettings run;
  int grid = 9;
  unsigned threads = 1;
};

struct Optimum {
  double omega_over_v = 0.0;
  double delta_over_a = 0.0;
  double v_min = 0.25;
  double t_min = 0.0;
  double theta_opt = 0.0;
  /// Largest spin excitation up to the minimum sample.
  double peak_excitation = 0.0;
  /// "hp", "horizon", "bounds" or "none".
  std::string active_constraint;
  int evaluations = 0;
};

/// Coarse grid then pattern refinement of the HP-valid, adiabatic minimum.
/// Throws InfeasibleError when no grid point qualifies.
Optimum optimize_min_squeezing(const OptimizeSpec& spec);

}  // namespace nvsq
