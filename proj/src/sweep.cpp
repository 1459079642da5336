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

#include "nvsq/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "nvsq/analytic.hpp"
#include "nvsq/dynamics.hpp"
#include "nvsq/errors.hpp"

namespace nvsq {

namespace {

/// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

fock::HamiltonianSource fock_source(ModelKind m) {
  switch (m) {
    case ModelKind::Full: return fock::HamiltonianSource::FullUnequal;
    case ModelKind::Effective: return fock::HamiltonianSource::EffectiveUnequal;
    case ModelKind::Squeeze: return fock::HamiltonianSource::PureSqueeze;
  }
  return fock::HamiltonianSource::EffectiveUnequal;
}

/// Axes that shift A or v must land before the ratio axes that depend on them.
int axis_priority(std::string_view name) {
  if (name == "omega_over_v") return 1;
  if (name == "delta_over_a") return 2;
  return 0;
}

double peak_spin_excitation(const SqueezingTrace& tr) {
  double peak = 0.0;
  for (std::size_t t = 0; t < tr.size(); ++t) peak = std::max(peak, tr.max_spin_excitation(t));
  return peak;
}

}  // namespace

std::string_view to_string(Engine e) { return e == Engine::Gaussian ? "gaussian" : "fock"; }

std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Full: return "full";
    case ModelKind::Effective: return "effective";
    case ModelKind::Squeeze: return "squeeze-special";
  }
  return "unknown";
}

Engine parse_engine(std::string_view s) {
  if (s == "gaussian") return Engine::Gaussian;
  if (s == "fock") return Engine::Fock;
  throw ParameterError("unknown engine '" + std::string(s) + "' (expected gaussian or fock)");
}

ModelKind parse_model(std::string_view s) {
  if (s == "full") return ModelKind::Full;
  if (s == "effective") return ModelKind::Effective;
  if (s == "squeeze-special" || s == "squeeze") return ModelKind::Squeeze;
  throw ParameterError("unknown model '" + std::string(s) + "' (expected full, effective or squeeze-special)");
}

double default_mode_phase(ModelKind m) { return m == ModelKind::Squeeze ? kPi / 4.0 : 0.0; }

LinearModel build_model(const SystemParams& p, ModelKind m) {
  switch (m) {
    case ModelKind::Full: return build_full_model(p);
    case ModelKind::Effective: return build_effective_model(p);
    case ModelKind::Squeeze: return build_squeeze_model(p);
  }
  throw ParameterError("unknown model kind");
}

PointResult evaluate_point(const SystemParams& p, const RunSettings& run) {
  check_params(p);
  if (!(run.horizon >= 0.0) || !std::isfinite(run.horizon)) throw ParameterError("horizon must be non-negative");
  if (run.horizon > 0.0 && run.samples < 2) throw ParameterError("samples must be at least 2");
  if (!(run.hp_fraction > 0.0)) throw ParameterError("hp_fraction must be positive");

  TraceSettings ts;
  ts.theta = run.theta;
  ts.mode_phase = default_mode_phase(run.model);
  ts.hp_fraction = run.hp_fraction;
  ts.n_spins = static_cast<double>(p.n_spins);

  PointResult out;
  if (run.engine == Engine::Fock) {
    fock::FockConfig cfg = run.fock;
    cfg.source = fock_source(run.model);
    if (cfg.cutoffs.empty()) cfg.cutoffs.assign(fock::mode_count(cfg.source), run.model == ModelKind::Full ? 6 : 12);
    cfg.dissipation = cfg.dissipation || (run.model == ModelKind::Full && p.kappa > 0.0);
    if (run.horizon == 0.0) {
      const ModeLayout layout = run.model == ModelKind::Full ? ModeLayout::full() : ModeLayout::spins();
      const std::array<MomentState, 1> s{vacuum_state(layout)};
      out.trace = make_squeezing_trace(std::span<const MomentState>(s), layout, ts);
    } else {
      fock::FockRun fr = fock::evolve_fock(p, cfg, run.horizon, run.samples, ts);
      out.trace = std::move(fr.trace);
      fr.trace = SqueezingTrace{};
      out.fock = std::move(fr);
    }
    out.minimum = find_min_variance(out.trace);
    out.peak_excitation = peak_spin_excitation(out.trace);
    return out;
  }

  const LinearModel model = build_model(p, run.model);
  const MomentState s0 = vacuum_state(model.layout);
  if (run.horizon == 0.0) {
    const std::array<MomentState, 1> s{s0};
    out.trace = make_squeezing_trace(std::span<const MomentState>(s), model.layout, ts);
  } else {
    TraceOptions opts;
    opts.excitation_cap = static_cast<double>(p.n_spins);
    const Trajectory traj = propagate_trace(model, s0, run.horizon, run.samples, opts);
    out.truncated = traj.truncated;
    out.trace = make_squeezing_trace(traj, model.layout, ts);
  }
  if (run.refine && out.trace.size() > 1) {
    Refinement r{&model, s0};
    out.minimum = find_min_variance(out.trace, &r);
  } else {
    out.minimum = find_min_variance(out.trace);
  }
  out.peak_excitation = peak_spin_excitation(out.trace);
  return out;
}

std::vector<std::string_view> axis_names() {
  return {"omega_over_v", "delta_over_a", "g_hz", "v_hz", "kappa_hz", "n_th", "horizon_s"};
}

void apply_axis(SystemParams& p, RunSettings& run, std::string_view name, double value) {
  if (!std::isfinite(value)) throw ParameterError("axis '" + std::string(name) + "' has a non-finite value");
  if (name == "omega_over_v") {
    p = with_detuning_ratio(p, value);
  } else if (name == "delta_over_a") {
    p = with_zeeman_offset_ratio(p, value);
  } else if (name == "g_hz") {
    p.g_collective = from_hz(value);
  } else if (name == "v_hz") {
    // keep ω fixed in absolute terms
    p.v = from_hz(value);
  } else if (name == "kappa_hz") {
    p.kappa = from_hz(value);
  } else if (name == "n_th") {
    p.n_th = value;
  } else if (name == "horizon_s") {
    run.horizon = value;
  } else {
    throw ParameterError("unknown sweep axis '" + std::string(name) + "'");
  }
}

SweepTable run_sweep(const SweepSpec& spec) {
  if (spec.axes.size() > 3) throw ParameterError("a sweep has at most 3 axes");
  std::size_t total = 1;
  SweepTable table;
  for (const SweepAxis& a : spec.axes) {
    const auto names = axis_names();
    if (std::find(names.begin(), names.end(), a.name) == names.end())
      throw ParameterError("unknown sweep axis '" + a.name + "'");
    if (a.values.empty()) throw ParameterError("sweep axis '" + a.name + "' has no values");
    total *= a.values.size();
    if (total > kMaxSweepRuns)
      throw ParameterError("sweep exceeds the budget of " + std::to_string(kMaxSweepRuns) + " runs");
    table.axis_names.push_back(a.name);
  }
  table.rows.resize(total);

  // Application order by priority, stable within equal priority.
  std::vector<std::size_t> order(spec.axes.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return axis_priority(spec.axes[a].name) < axis_priority(spec.axes[b].name);
  });

  parallel_for(total, spec.threads, [&](std::size_t idx) {
    SweepRow& row = table.rows[idx];
    row.coords.assign(spec.axes.size(), 0.0);
    std::size_t rest = idx;
    for (std::size_t k = spec.axes.size(); k-- > 0;) {
      const auto& vals = spec.axes[k].values;
      row.coords[k] = vals[rest % vals.size()];
      rest /= vals.size();
    }
    SystemParams p = spec.base;
    RunSettings run = spec.run;
    try {
      for (std::size_t k : order) apply_axis(p, run, spec.axes[k].name, row.coords[k]);
      const AdiabaticityReport ad = adiabaticity_report(p);
      row.g_over_sum = ad.g_over_sum;
      row.g_over_diff = ad.g_over_diff;
      row.adiabatic = ad.adiabatic;
      row.regime = std::string(analytic::to_string(analytic::classify_regime(p)));
      const PointResult r = evaluate_point(p, run);
      row.v_min = r.minimum.variance;
      row.t_min = r.minimum.time;
      row.theta_opt = r.minimum.theta;
      row.peak_excitation = r.peak_excitation;
      row.hp_valid = !r.trace.first_violation.has_value();
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return table;
}

Optimum optimize_min_squeezing(const OptimizeSpec& spec) {
  const OptimizeBounds& b = spec.bounds;
  if (!(b.omega_over_v_lo <= b.omega_over_v_hi) || !(b.delta_over_a_lo <= b.delta_over_a_hi))
    throw ParameterError("optimizer bounds must satisfy lo <= hi");
  if (spec.grid < 1) throw ParameterError("optimizer grid must be at least 1");
  RunSettings run = spec.run;
  run.engine = Engine::Gaussian;

  const std::array<double, 2> lo{b.omega_over_v_lo, b.delta_over_a_lo};
  const std::array<double, 2> hi{b.omega_over_v_hi, b.delta_over_a_hi};

  struct Eval {
    bool feasible = false;
    double value = std::numeric_limits<double>::infinity();
    PointResult result;
  };
  int evaluations = 0;
  auto evaluate = [&](const std::array<double, 2>& x) {
    Eval e;
    try {
      SystemParams p = with_zeeman_offset_ratio(with_detuning_ratio(spec.base, x[0]), x[1]);
      if (!adiabaticity_report(p).adiabatic) return e;
      e.result = evaluate_point(p, run);
      e.feasible = true;
      e.value = e.result.minimum.variance;
    } catch (const Error&) {
      e.feasible = false;
    }
    return e;
  };

  // Coarse grid, collapsed dimensions contribute a single node.
  std::array<int, 2> nodes{};
  for (int d = 0; d < 2; ++d) nodes[d] = lo[d] == hi[d] ? 1 : std::max(2, spec.grid);
  const std::size_t total = static_cast<std::size_t>(nodes[0]) * nodes[1];
  std::vector<std::array<double, 2>> points(total);
  std::vector<Eval> evals(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::array<std::size_t, 2> idx{i / nodes[1], i % nodes[1]};
    for (int d = 0; d < 2; ++d)
      points[i][d] = nodes[d] == 1 ? lo[d] : lo[d] + (hi[d] - lo[d]) * double(idx[d]) / (nodes[d] - 1);
  }
  parallel_for(total, spec.threads, [&](std::size_t i) { evals[i] = evaluate(points[i]); });
  evaluations += static_cast<int>(total);

  std::optional<std::size_t> best_idx;
  for (std::size_t i = 0; i < total; ++i) {
    if (evals[i].feasible && (!best_idx || evals[i].value < evals[*best_idx].value)) best_idx = i;
  }
  if (!best_idx) throw InfeasibleError("no HP-valid, adiabatic point inside the optimizer bounds");
  std::array<double, 2> x = points[*best_idx];
  Eval best = std::move(evals[*best_idx]);

  // Compass search from the best node.
  std::array<double, 2> step{};
  for (int d = 0; d < 2; ++d) step[d] = nodes[d] == 1 ? 0.0 : (hi[d] - lo[d]) / (nodes[d] - 1);
  const double min_step = 1e-6;
  while (std::max(step[0], step[1]) > min_step && evaluations < 400) {
    bool moved = false;
    for (int d = 0; d < 2 && !moved; ++d) {
      if (step[d] <= min_step) continue;
      for (double sign : {-1.0, 1.0}) {
        std::array<double, 2> y = x;
        y[d] = std::clamp(x[d] + sign * step[d], lo[d], hi[d]);
        if (y[d] == x[d]) continue;
        Eval e = evaluate(y);
        ++evaluations;
        if (e.feasible && e.value < best.value) {
          x = y;
          best = std::move(e);
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      step[0] *= 0.5;
      step[1] *= 0.5;
    }
  }

  Optimum opt;
  opt.omega_over_v = x[0];
  opt.delta_over_a = x[1];
  opt.v_min = best.result.minimum.variance;
  opt.t_min = best.result.minimum.time;
  opt.theta_opt = best.result.minimum.theta;
  opt.evaluations = evaluations;

  const SqueezingTrace& tr = best.result.trace;
  const std::size_t k = best.result.minimum.sample;
  opt.peak_excitation = 0.0;
  for (std::size_t t = 0; t <= k && t < tr.size(); ++t)
    opt.peak_excitation = std::max(opt.peak_excitation, tr.max_spin_excitation(t));
  const bool hp_binding = k + 1 < tr.size() && !tr.hp_valid[k + 1];
  const bool horizon_binding = !tr.empty() && k + 1 == tr.size() && !best.result.truncated;
  bool on_bound = false;
  for (int d = 0; d < 2; ++d) {
    if (lo[d] != hi[d] && (x[d] == lo[d] || x[d] == hi[d])) on_bound = true;
  }
  opt.active_constraint = hp_binding ? "hp" : horizon_binding ? "horizon" : on_bound ? "bounds" : "none";
  return opt;
}

}  // namespace nvsq
