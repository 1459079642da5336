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

#include "nvsq/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "nvsq/model.hpp"

namespace nvsq::report {

namespace {

using nlohmann::json;

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json rounded(const json& j) {
  if (j.is_number_float()) {
    const double x = round12(j.get<double>());
    return std::isfinite(x) ? json(x) : json(nullptr);
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& e : j) out.push_back(rounded(e));
    return out;
  }
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = rounded(v);
    return out;
  }
  return j;
}

double shown(double variance, bool decibel) { return decibel ? to_decibel(variance) : variance; }

std::vector<double> occupation_column(const SqueezingTrace& tr, std::string_view label) {
  if (!tr.layout.contains(label)) return {};
  return tr.occupations[tr.layout.index(label)];
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_trace_csv(std::ostream& os, const SqueezingTrace& tr, bool decibel) {
  os << kTraceHeader << '\n';
  const auto c1 = occupation_column(tr, "c1");
  const auto c2 = occupation_column(tr, "c2");
  const auto a = occupation_column(tr, "a");
  const auto b = occupation_column(tr, "b");
  auto cell = [](const std::vector<double>& col, std::size_t t) {
    return col.empty() ? std::string() : format_number(col[t]);
  };
  for (std::size_t t = 0; t < tr.size(); ++t) {
    os << format_number(tr.times[t]) << ',' << format_number(shown(tr.variance_theta[t], decibel)) << ','
       << format_number(shown(tr.variance_opt[t], decibel)) << ',' << format_number(tr.theta_opt[t]) << ','
       << cell(c1, t) << ',' << cell(c2, t) << ',' << cell(a, t) << ',' << cell(b, t) << ','
       << (tr.hp_valid[t] ? 1 : 0) << '\n';
  }
}

json trace_to_json(const SqueezingTrace& tr, bool decibel) {
  json j;
  j["units"] = decibel ? "dB" : "vacuum=0.25";
  j["t_s"] = tr.times;
  std::vector<double> vt, vo;
  for (std::size_t t = 0; t < tr.size(); ++t) {
    vt.push_back(shown(tr.variance_theta[t], decibel));
    vo.push_back(shown(tr.variance_opt[t], decibel));
  }
  j["variance_theta"] = vt;
  j["variance_opt"] = vo;
  j["theta_opt"] = tr.theta_opt;
  json occ = json::object();
  for (std::size_t k = 0; k < tr.layout.size(); ++k) occ[tr.layout.mode(k).label] = tr.occupations[k];
  j["occupations"] = occ;
  std::vector<bool> valid(tr.hp_valid.begin(), tr.hp_valid.end());
  j["hp_valid"] = valid;
  j["first_violation_s"] = tr.first_violation ? json(*tr.first_violation) : json(nullptr);
  j["theta"] = tr.settings.theta;
  j["mode_phase"] = tr.settings.mode_phase;
  j["hp_fraction"] = tr.settings.hp_fraction;
  return j;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  for (const auto& name : table.axis_names) os << csv_field(name) << ',';
  os << "regime,v_min,t_min,theta_opt,peak_excitation,hp_valid,g_over_sum,g_over_diff,adiabatic,error\n";
  for (const SweepRow& r : table.rows) {
    for (double c : r.coords) os << format_number(c) << ',';
    os << csv_field(r.regime) << ',';
    if (r.error.empty()) {
      os << format_number(r.v_min) << ',' << format_number(r.t_min) << ',' << format_number(r.theta_opt) << ','
         << format_number(r.peak_excitation) << ',' << (r.hp_valid ? 1 : 0) << ',';
    } else {
      os << ",,,,,";
    }
    os << format_number(r.g_over_sum) << ',' << format_number(r.g_over_diff) << ',' << (r.adiabatic ? 1 : 0) << ','
       << csv_field(r.error) << '\n';
  }
}

void write_device_table(std::ostream& os, const device::DeviceReport& rep) {
  os << "quantity,value,unit\n";
  os << "g_single," << format_number(to_hz(rep.g_single)) << ",Hz\n";
  os << "g_collective," << format_number(to_hz(rep.g_collective)) << ",Hz\n";
  os << "f_mech," << format_number(to_hz(rep.omega_m)) << ",Hz\n";
  os << "kappa," << format_number(to_hz(rep.kappa)) << ",Hz\n";
  os << "n_th," << format_number(rep.n_th) << ",1\n";
  os << "kappa_reference," << format_number(to_hz(rep.kappa_reference)) << ",Hz\n";
  os << "kappa_at_2ghz," << format_number(to_hz(rep.kappa_at_reference_mech)) << ",Hz\n";
  os << "n_th_at_2ghz," << format_number(rep.n_th_at_reference_mech) << ",1\n";
}

json device_to_json(const device::DeviceReport& rep) {
  const auto& g = rep.geometry;
  json j;
  j["geometry"] = {{"length_m", g.length},         {"width_m", g.width},
                   {"height_m", g.height},         {"density", g.density},
                   {"youngs_modulus", g.youngs_modulus}, {"quality_factor", g.quality_factor},
                   {"temperature_k", g.temperature}};
  j["n_spins"] = rep.n_spins;
  j["g_single_hz"] = to_hz(rep.g_single);
  j["g_collective_hz"] = to_hz(rep.g_collective);
  j["f_mech_hz"] = to_hz(rep.omega_m);
  j["kappa_hz"] = to_hz(rep.kappa);
  j["kappa_reference_hz"] = to_hz(rep.kappa_reference);
  j["kappa_at_2ghz_hz"] = to_hz(rep.kappa_at_reference_mech);
  j["n_th_at_2ghz"] = rep.n_th_at_reference_mech;
  j["n_th"] = rep.n_th;
  j["warnings"] = rep.warnings;
  return j;
}

json adiabaticity_to_json(const AdiabaticityReport& rep) {
  return {{"g_over_sum", rep.g_over_sum},
          {"g_over_diff", rep.g_over_diff},
          {"kappa_over_sum", rep.kappa_over_sum},
          {"kappa_over_diff", rep.kappa_over_diff},
          {"worst", rep.worst},
          {"threshold", AdiabaticityReport::kThreshold},
          {"adiabatic", rep.adiabatic}};
}

std::string dump_json(const json& j) { return rounded(j).dump(2) + "\n"; }

}  // namespace nvsq::report
