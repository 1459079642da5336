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

#include "nvsq/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nvsq/errors.hpp"

namespace nvsq {

namespace {

using nlohmann::json;

/// One JSON object plus its pointer, tracking which keys were read.
class Section {
 public:
  Section(const json& node, std::string pointer) : node_(node), pointer_(std::move(pointer)) {
    if (!node_.is_object()) fail(pointer_.empty() ? "/" : pointer_, "expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  std::string at(const std::string& key) const { return pointer_ + "/" + key; }
  std::string where() const { return pointer_.empty() ? "/" : pointer_; }

  const json& raw(const std::string& key) {
    used_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(at(key), "expected a finite number");
    return d;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) fail(at(key), "expected a number or an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(at(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  /// Rejects keys nobody asked for.
  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!used_.count(key)) fail(at(key), "unknown key");
    }
  }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
  }

 private:
  const json& node_;
  std::string pointer_;
  std::set<std::string> used_;
};

/// Runs fn and re-throws library errors with the given location.
template <typename Fn>
void located(const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    Section::fail(where, e.what());
  }
}

SystemParams parse_system(Section& s) {
  SystemParams p;
  p.omega_m = from_hz(s.number("omega_m", 2e9));
  p.g_collective = from_hz(s.number("g", 40e3));
  p.v = from_hz(s.number("v", 1e6));
  p.n_spins = s.integer("n_spins", 100);
  p.kappa = from_hz(s.number("kappa", 0.0));
  p.n_th = s.number("n_th", 0.0);

  const int b1_keys = s.has("delta_b1") + s.has("detuning") + s.has("omega_over_v");
  if (b1_keys > 1) Section::fail(s.at("delta_b1"), "give only one of delta_b1, detuning, omega_over_v");
  const int b2_keys = s.has("delta_b2") + s.has("zeeman_offset") + s.has("delta_over_a");
  if (b2_keys > 1) Section::fail(s.at("delta_b2"), "give only one of delta_b2, zeeman_offset, delta_over_a");

  if (s.has("delta_b1")) {
    p.delta_b1 = from_hz(s.number("delta_b1", 0.0));
  } else if (s.has("detuning")) {
    p.delta_b1 = p.omega_m + from_hz(s.number("detuning", 0.0));
  } else {
    p.delta_b1 = p.omega_m + s.number("omega_over_v", 2.0) * p.v;
  }
  p.delta_b2 = p.delta_b1;
  located(s.where(), [&] { check_params(p); });
  if (s.has("delta_b2")) {
    p.delta_b2 = from_hz(s.number("delta_b2", 0.0));
  } else if (s.has("zeeman_offset")) {
    p.delta_b2 = p.delta_b1 - from_hz(s.number("zeeman_offset", 0.0));
  } else if (s.has("delta_over_a")) {
    const double r = s.number("delta_over_a", 0.0);
    located(s.at("delta_over_a"), [&] { p = with_zeeman_offset_ratio(p, r); });
  }
  s.finish();
  return p;
}

device::BeamGeometry parse_geometry(Section& s) {
  device::BeamGeometry g;
  g.length = s.number("length_m", g.length);
  g.width = s.number("width_m", g.width);
  g.height = s.number("height_m", g.height);
  g.density = s.number("density", g.density);
  g.youngs_modulus = s.number("youngs_modulus", g.youngs_modulus);
  g.quality_factor = s.number("quality_factor", g.quality_factor);
  g.temperature = s.number("temperature_k", g.temperature);
  s.finish();
  located(s.where(), [&] { device::check_geometry(g); });
  return g;
}

void parse_run(Section& s, RunConfig& cfg) {
  RunSettings& r = cfg.run;
  r.horizon = s.number("horizon_s", r.horizon);
  if (r.horizon < 0.0) Section::fail(s.at("horizon_s"), "must be non-negative");
  const std::int64_t samples = s.integer("samples", r.samples);
  if (samples < 2 || samples > 10'000'000) Section::fail(s.at("samples"), "must lie in [2, 10000000]");
  r.samples = static_cast<int>(samples);
  if (s.has("theta")) {
    cfg.thetas = s.numbers("theta");
    if (cfg.thetas.empty()) Section::fail(s.at("theta"), "needs at least one angle");
  }
  r.theta = cfg.thetas.front();
  r.hp_fraction = s.number("hp_fraction", r.hp_fraction);
  if (!(r.hp_fraction > 0.0)) Section::fail(s.at("hp_fraction"), "must be positive");
  located(s.at("engine"), [&] { r.engine = parse_engine(s.string("engine", "gaussian")); });
  located(s.at("model"), [&] { r.model = parse_model(s.string("model", "effective")); });
  r.refine = s.boolean("refine", r.refine);
  const std::int64_t threads = s.integer("threads", 1);
  if (threads < 1 || threads > 256) Section::fail(s.at("threads"), "must lie in [1, 256]");
  cfg.threads = static_cast<unsigned>(threads);
  s.finish();
}

void parse_fock(Section& s, RunConfig& cfg) {
  FockOptions& f = cfg.fock;
  if (s.has("cutoffs")) {
    const json& v = s.raw("cutoffs");
    if (!v.is_array()) Section::fail(s.at("cutoffs"), "expected an array of integers");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer() || v[i].get<std::int64_t>() < 2 || v[i].get<std::int64_t>() > 4096)
        Section::fail(s.at("cutoffs") + "/" + std::to_string(i), "expected an integer in [2, 4096]");
      f.cutoffs.push_back(v[i].get<int>());
    }
  }
  f.richardson = s.boolean("richardson", f.richardson);
  f.boundary_tolerance = s.number("boundary_tolerance", f.boundary_tolerance);
  if (!(f.boundary_tolerance > 0.0)) Section::fail(s.at("boundary_tolerance"), "must be positive");
  f.step = s.number("step_s", f.step);
  if (f.step < 0.0) Section::fail(s.at("step_s"), "must be non-negative");
  f.dissipation = s.boolean("dissipation", f.dissipation);
  f.adjudicate = s.boolean("adjudicate", f.adjudicate);
  s.finish();
  fock::FockConfig& fc = cfg.run.fock;
  fc.cutoffs = f.cutoffs;
  fc.richardson_check = f.richardson;
  fc.boundary_tolerance = f.boundary_tolerance;
  fc.integrator_step = f.step;
  fc.dissipation = f.dissipation;
}

void parse_sweep(Section& s, RunConfig& cfg) {
  if (s.has("axes")) {
    const json& axes = s.raw("axes");
    if (!axes.is_array()) Section::fail(s.at("axes"), "expected an array");
    if (axes.size() > 3) Section::fail(s.at("axes"), "at most 3 axes");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      Section a(axes[i], s.at("axes") + "/" + std::to_string(i));
      SweepAxis axis;
      axis.name = a.string("name", "");
      const auto names = axis_names();
      if (std::find(names.begin(), names.end(), axis.name) == names.end())
        Section::fail(a.at("name"), "unknown axis '" + axis.name + "'");
      if (a.has("values")) {
        if (a.has("start") || a.has("stop") || a.has("count"))
          Section::fail(a.at("values"), "give either values or start/stop/count");
        axis.values = a.numbers("values");
      } else {
        const double start = a.number("start", 0.0);
        const double stop = a.number("stop", start);
        const std::int64_t count = a.integer("count", 1);
        if (count < 1) Section::fail(a.at("count"), "must be at least 1");
        for (std::int64_t k = 0; k < count; ++k)
          axis.values.push_back(count == 1 ? start : start + (stop - start) * double(k) / double(count - 1));
      }
      if (axis.values.empty()) Section::fail(a.at("values"), "needs at least one value");
      a.finish();
      cfg.axes.push_back(std::move(axis));
    }
  }
  s.finish();
}

void parse_optimize(Section& s, RunConfig& cfg) {
  auto range = [&](const std::string& key, double& lo, double& hi) {
    if (!s.has(key)) return;
    const auto v = s.numbers(key);
    if (v.size() == 1) {
      lo = hi = v[0];
    } else if (v.size() == 2 && v[0] <= v[1]) {
      lo = v[0];
      hi = v[1];
    } else {
      Section::fail(s.at(key), "expected a number or [lo, hi] with lo <= hi");
    }
  };
  range("omega_over_v", cfg.bounds.omega_over_v_lo, cfg.bounds.omega_over_v_hi);
  range("delta_over_a", cfg.bounds.delta_over_a_lo, cfg.bounds.delta_over_a_hi);
  const std::int64_t grid = s.integer("grid", cfg.optimize_grid);
  if (grid < 1 || grid > 1000) Section::fail(s.at("grid"), "must lie in [1, 1000]");
  cfg.optimize_grid = static_cast<int>(grid);
  s.finish();
}

void parse_output(Section& s, RunConfig& cfg) {
  OutputOptions& o = cfg.output;
  o.directory = s.string("directory", o.directory.string());
  o.csv = s.boolean("csv", o.csv);
  o.json = s.boolean("json", o.json);
  o.decibel = s.boolean("decibel", o.decibel);
  s.finish();
}

}  // namespace

RunConfig parse_config(const json& doc) {
  Section root(doc, "");
  const std::string units = root.string("units", "hz");
  if (units != "hz") Section::fail("/units", "only \"hz\" is supported");

  RunConfig cfg;
  // Defaults give the reference point when the section is absent.
  static const json kEmpty = json::object();
  {
    Section s(root.has("system") ? root.raw("system") : kEmpty, "/system");
    cfg.system = parse_system(s);
  }
  if (root.has("geometry")) {
    Section s(root.raw("geometry"), "/geometry");
    cfg.geometry = parse_geometry(s);
  }
  if (root.has("run")) {
    Section s(root.raw("run"), "/run");
    parse_run(s, cfg);
  }
  if (root.has("fock")) {
    Section s(root.raw("fock"), "/fock");
    parse_fock(s, cfg);
  }
  if (root.has("sweep")) {
    Section s(root.raw("sweep"), "/sweep");
    parse_sweep(s, cfg);
  }
  if (root.has("optimize")) {
    Section s(root.raw("optimize"), "/optimize");
    parse_optimize(s, cfg);
  }
  if (root.has("output")) {
    Section s(root.raw("output"), "/output");
    parse_output(s, cfg);
  }
  root.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json params_to_json(const SystemParams& p) {
  json j;
  j["omega_m_hz"] = to_hz(p.omega_m);
  j["delta_b1_hz"] = to_hz(p.delta_b1);
  j["delta_b2_hz"] = to_hz(p.delta_b2);
  j["detuning_hz"] = to_hz(p.detuning());
  j["zeeman_offset_hz"] = to_hz(p.zeeman_offset());
  j["g_hz"] = to_hz(p.g_collective);
  j["v_hz"] = to_hz(p.v);
  j["n_spins"] = p.n_spins;
  j["kappa_hz"] = to_hz(p.kappa);
  j["n_th"] = p.n_th;
  return j;
}

}  // namespace nvsq
