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

#include "nvsq/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nvsq/analytic.hpp"
#include "nvsq/builder.hpp"
#include "nvsq/device.hpp"
#include "nvsq/dynamics.hpp"
#include "nvsq/errors.hpp"
#include "nvsq/fock.hpp"
#include "nvsq/report.hpp"
#include "nvsq/sweep.hpp"

#ifndef NVSQ_VERSION
#define NVSQ_VERSION "0.0.0"
#endif

namespace nvsq::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using report::format_number;

struct Plot {
  std::string file;
  std::string x;
  std::vector<std::string> y;
};

/// Collects written files and the plot manifest for one command.
class Output {
 public:
  explicit Output(const RunConfig& cfg) : dir_(cfg.output.directory) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
    f << content;
    files_.push_back(name);
  }

  void plot(Plot p) { plots_.push_back(std::move(p)); }

  void manifest(const std::string& command) {
    json m;
    m["command"] = command;
    m["version"] = version();
    m["files"] = files_;
    json plots = json::array();
    for (const Plot& p : plots_) plots.push_back({{"file", p.file}, {"x", p.x}, {"y", p.y}});
    m["plots"] = plots;
    std::ofstream f(dir_ / "manifest.json", std::ios::binary);
    f << report::dump_json(m);
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
  std::vector<Plot> plots_;
};

std::string regime_label(const SystemParams& p) {
  try {
    return std::string(analytic::to_string(analytic::classify_regime(p)));
  } catch (const Error&) {
    return "undefined";
  }
}

json warnings_json(const SystemParams& p) {
  json w = json::array();
  for (const Warning& x : validate(p)) w.push_back({{"code", x.code}, {"message", x.message}});
  return w;
}

json summary_base(const RunConfig& cfg, const std::string& command) {
  json j;
  j["command"] = command;
  j["version"] = version();
  j["engine"] = to_string(cfg.run.engine);
  j["model"] = to_string(cfg.run.model);
  j["parameters"] = params_to_json(cfg.system);
  j["regime"] = regime_label(cfg.system);
  j["adiabaticity"] = report::adiabaticity_to_json(adiabaticity_report(cfg.system));
  j["warnings"] = warnings_json(cfg.system);
  j["horizon_s"] = cfg.run.horizon;
  j["samples"] = cfg.run.samples;
  j["hp_fraction"] = cfg.run.hp_fraction;
  return j;
}

json fock_json(const fock::FockRun& r) {
  json j;
  j["norm_drift"] = r.norm_drift;
  j["max_boundary_population"] = r.max_boundary_population;
  j["step_s"] = r.step;
  j["richardson_error"] = r.richardson_error ? json(*r.richardson_error) : json(nullptr);
  j["kernels"] = simd::to_string(r.isa);
  j["warnings"] = r.warnings;
  return j;
}

void emit_trace(Output& o, const RunConfig& cfg, const SqueezingTrace& tr, const std::string& stem) {
  if (cfg.output.csv) {
    std::ostringstream s;
    report::write_trace_csv(s, tr, cfg.output.decibel);
    o.write(stem + ".csv", s.str());
    o.plot({stem + ".csv", "t_s", {"variance_theta", "variance_opt", "exc_c1", "exc_c2"}});
  }
  if (cfg.output.json) o.write(stem + ".json", report::dump_json(report::trace_to_json(tr, cfg.output.decibel)));
}

}  // namespace

std::string_view version() { return NVSQ_VERSION; }

int exit_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const ResonanceError*>(&e) ||
      dynamic_cast<const DomainError*>(&e) || dynamic_cast<const RegimeError*>(&e) ||
      dynamic_cast<const LayoutError*>(&e))
    return kExitConfig;
  if (dynamic_cast<const NumericError*>(&e) || dynamic_cast<const CutoffOverflowError*>(&e) ||
      dynamic_cast<const DegenerateError*>(&e))
    return kExitNumeric;
  if (dynamic_cast<const HpInvalidError*>(&e) || dynamic_cast<const InfeasibleError*>(&e)) return kExitHpInvalid;
  return kExitFailure;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  Output o(cfg);
  json summary = summary_base(cfg, "simulate");
  json traces = json::array();
  std::optional<PointResult> first;
  for (std::size_t i = 0; i < cfg.thetas.size(); ++i) {
    RunSettings run = cfg.run;
    run.theta = cfg.thetas[i];
    PointResult r = evaluate_point(cfg.system, run);
    const std::string stem = cfg.thetas.size() == 1 ? "trace" : "trace_" + std::to_string(i);
    emit_trace(o, cfg, r.trace, stem);
    double vmin_theta = r.trace.variance_theta.front();
    for (double v : r.trace.variance_theta) vmin_theta = std::min(vmin_theta, v);
    traces.push_back({{"theta", run.theta}, {"stem", stem}, {"min_variance_theta", vmin_theta}});
    if (!first) first = std::move(r);
  }
  const PointResult& r = *first;
  summary["v_min"] = r.minimum.variance;
  summary["v_min_db"] = to_decibel(r.minimum.variance);
  summary["t_min"] = r.minimum.time;
  summary["theta_opt"] = r.minimum.theta;
  summary["peak_excitation"] = r.peak_excitation;
  summary["first_hp_violation_s"] = r.trace.first_violation ? json(*r.trace.first_violation) : json(nullptr);
  summary["truncated"] = r.truncated;
  summary["traces"] = traces;
  if (r.fock) summary["fock"] = fock_json(*r.fock);
  o.write("summary.json", report::dump_json(summary));
  o.manifest("simulate");

  out << "v_min = " << format_number(r.minimum.variance) << " at t = " << format_number(r.minimum.time)
      << " s (theta_opt = " << format_number(r.minimum.theta) << ", " << format_number(to_decibel(r.minimum.variance))
      << " dB)\n";
  out << "regime: " << summary["regime"].get<std::string>() << ", peak excitation "
      << format_number(r.peak_excitation) << "\n";
  for (const auto& w : summary["warnings"]) out << "warning: " << w["message"].get<std::string>() << "\n";
  return kExitOk;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out) {
  Output o(cfg);
  if (!(cfg.run.horizon > 0.0)) throw ParameterError("compare needs a positive horizon");
  TraceSettings ts;
  ts.theta = cfg.thetas.front();
  ts.hp_fraction = cfg.run.hp_fraction;
  ts.n_spins = static_cast<double>(cfg.system.n_spins);

  const LinearModel full = build_full_model(cfg.system);
  const LinearModel eff = build_effective_model(cfg.system);
  const SqueezingTrace tf = make_squeezing_trace(
      propagate_trace(full, vacuum_state(full.layout), cfg.run.horizon, cfg.run.samples), full.layout, ts);
  const SqueezingTrace te = make_squeezing_trace(
      propagate_trace(eff, vacuum_state(eff.layout), cfg.run.horizon, cfg.run.samples), eff.layout, ts);

  double max_dev = 0.0, sum_dev = 0.0;
  std::ostringstream csv;
  csv << "t_s,variance_full,variance_effective\n";
  for (std::size_t t = 0; t < tf.size(); ++t) {
    const double d = std::abs(tf.variance_theta[t] - te.variance_theta[t]);
    max_dev = std::max(max_dev, d);
    sum_dev += d;
    csv << format_number(tf.times[t]) << ',' << format_number(tf.variance_theta[t]) << ','
        << format_number(te.variance_theta[t]) << '\n';
  }
  const double mean_dev = sum_dev / static_cast<double>(tf.size());
  const bool flagged = max_dev > kCompareTolerance;
  o.write("compare.csv", csv.str());
  o.plot({"compare.csv", "t_s", {"variance_full", "variance_effective"}});

  json summary = summary_base(cfg, "compare");
  summary["theta"] = ts.theta;
  summary["max_deviation"] = max_dev;
  summary["mean_deviation"] = mean_dev;
  summary["tolerance"] = kCompareTolerance;
  summary["flagged"] = flagged;
  o.write("summary.json", report::dump_json(summary));
  o.manifest("compare");

  out << "max |full - effective| = " << format_number(max_dev) << ", mean = " << format_number(mean_dev) << "\n";
  if (flagged) out << "FLAG: deviation exceeds " << format_number(kCompareTolerance) << "\n";
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  Output o(cfg);
  SweepSpec spec;
  spec.base = cfg.system;
  spec.axes = cfg.axes;
  spec.run = cfg.run;
  spec.threads = cfg.threads;
  const SweepTable table = run_sweep(spec);

  if (cfg.output.csv) {
    std::ostringstream s;
    report::write_sweep_csv(s, table);
    o.write("sweep.csv", s.str());
    if (!table.axis_names.empty()) o.plot({"sweep.csv", table.axis_names.front(), {"v_min", "peak_excitation"}});
  }
  if (cfg.output.json) {
    json rows = json::array();
    for (const SweepRow& r : table.rows) {
      json j;
      for (std::size_t k = 0; k < r.coords.size(); ++k) j[table.axis_names[k]] = r.coords[k];
      j["regime"] = r.regime;
      if (r.error.empty()) {
        j["v_min"] = r.v_min;
        j["t_min"] = r.t_min;
        j["theta_opt"] = r.theta_opt;
        j["peak_excitation"] = r.peak_excitation;
        j["hp_valid"] = r.hp_valid;
      } else {
        j["error"] = r.error;
      }
      j["g_over_sum"] = r.g_over_sum;
      j["g_over_diff"] = r.g_over_diff;
      j["adiabatic"] = r.adiabatic;
      rows.push_back(j);
    }
    o.write("sweep.json", report::dump_json({{"axes", table.axis_names}, {"rows", rows}}));
  }
  o.manifest("sweep");

  std::size_t failed = 0;
  for (const SweepRow& r : table.rows) failed += r.error.empty() ? 0 : 1;
  out << table.rows.size() << " points, " << failed << " with errors\n";
  for (const SweepRow& r : table.rows) {
    for (std::size_t k = 0; k < r.coords.size(); ++k) out << table.axis_names[k] << "=" << format_number(r.coords[k]) << " ";
    if (r.error.empty()) {
      out << "v_min=" << format_number(r.v_min) << " t_min=" << format_number(r.t_min) << "\n";
    } else {
      out << "error: " << r.error << "\n";
    }
  }
  return kExitOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
  Output o(cfg);
  OptimizeSpec spec;
  spec.base = cfg.system;
  spec.bounds = cfg.bounds;
  spec.run = cfg.run;
  spec.grid = cfg.optimize_grid;
  spec.threads = cfg.threads;
  const Optimum opt = optimize_min_squeezing(spec);

  json summary = summary_base(cfg, "optimize");
  summary["bounds"] = {{"omega_over_v", {cfg.bounds.omega_over_v_lo, cfg.bounds.omega_over_v_hi}},
                       {"delta_over_a", {cfg.bounds.delta_over_a_lo, cfg.bounds.delta_over_a_hi}}};
  summary["optimum"] = {{"omega_over_v", opt.omega_over_v}, {"delta_over_a", opt.delta_over_a},
                        {"v_min", opt.v_min},               {"v_min_db", to_decibel(opt.v_min)},
                        {"t_min", opt.t_min},               {"theta_opt", opt.theta_opt},
                        {"peak_excitation", opt.peak_excitation}, {"active_constraint", opt.active_constraint},
                        {"evaluations", opt.evaluations}};
  o.write("optimum.json", report::dump_json(summary));
  o.manifest("optimize");

  out << "optimum: omega/v = " << format_number(opt.omega_over_v) << ", Delta/A = " << format_number(opt.delta_over_a)
      << ", v_min = " << format_number(opt.v_min) << " at t = " << format_number(opt.t_min) << " s\n";
  out << "active constraint: " << opt.active_constraint << " (" << opt.evaluations << " evaluations)\n";
  return kExitOk;
}

int cmd_device(const RunConfig& cfg, std::ostream& out) {
  Output o(cfg);
  const device::BeamGeometry geom = cfg.geometry.value_or(device::BeamGeometry{});
  const device::DeviceReport rep = device::device_report(geom, cfg.system.n_spins);

  std::ostringstream table;
  report::write_device_table(table, rep);
  if (cfg.output.csv) o.write("device.csv", table.str());
  json j = report::device_to_json(rep);
  j["version"] = version();
  if (cfg.output.json) o.write("device.json", report::dump_json(j));
  o.manifest("device");

  out << table.str();
  for (const auto& w : rep.warnings) out << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  Output o(cfg);
  json summary = summary_base(cfg, "oracle");

  if (cfg.fock.adjudicate) {
    const int cutoff = cfg.fock.cutoffs.empty() ? 12 : cfg.fock.cutoffs.front();
    const fock::Adjudication adj = fock::adjudicate_convention(cfg.system, cutoff);
    summary["adjudication"] = {{"convention", analytic::to_string(adj.convention)},
                               {"observed_time_s", adj.observed_time},
                               {"predicted_lambda_t_s", adj.predicted_lambda_t},
                               {"predicted_two_lambda_t_s", adj.predicted_two_lambda_t}};
    out << "convention: " << analytic::to_string(adj.convention) << " (first minimum at "
        << format_number(adj.observed_time) << " s; sin^2(lambda t) predicts " << format_number(adj.predicted_lambda_t)
        << " s, sin^2(2 lambda t) predicts " << format_number(adj.predicted_two_lambda_t) << " s)\n";
  }

  if (cfg.run.horizon > 0.0) {
    RunSettings run = cfg.run;
    run.refine = false;
    run.engine = Engine::Fock;
    const PointResult f = evaluate_point(cfg.system, run);
    run.engine = Engine::Gaussian;
    const PointResult g = evaluate_point(cfg.system, run);

    double max_dev = 0.0;
    std::ostringstream csv;
    csv << "t_s,variance_gaussian,variance_fock,exc_c1_gaussian,exc_c1_fock\n";
    const std::size_t n = std::min(f.trace.size(), g.trace.size());
    for (std::size_t t = 0; t < n; ++t) {
      max_dev = std::max(max_dev, std::abs(f.trace.variance_theta[t] - g.trace.variance_theta[t]));
      csv << format_number(g.trace.times[t]) << ',' << format_number(g.trace.variance_theta[t]) << ','
          << format_number(f.trace.variance_theta[t]) << ',' << format_number(g.trace.occupations[0][t]) << ','
          << format_number(f.trace.occupations[0][t]) << '\n';
    }
    o.write("oracle.csv", csv.str());
    o.plot({"oracle.csv", "t_s", {"variance_gaussian", "variance_fock"}});
    summary["max_deviation"] = max_dev;
    summary["v_min_fock"] = f.minimum.variance;
    summary["v_min_gaussian"] = g.minimum.variance;
    if (f.fock) summary["fock"] = fock_json(*f.fock);
    out << "max |gaussian - fock| = " << format_number(max_dev) << "\n";
    if (f.fock) {
      for (const auto& w : f.fock->warnings) out << "warning: " << w << "\n";
    }
  }
  o.write("oracle.json", report::dump_json(summary));
  o.manifest("oracle");
  return kExitOk;
}

}  // namespace nvsq::cli
