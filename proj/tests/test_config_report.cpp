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

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nvsq/config.hpp"
#include "nvsq/errors.hpp"
#include "nvsq/report.hpp"
#include "support/generators.hpp"

using namespace nvsq;
using nlohmann::json;
using Catch::Approx;

namespace {

/// Minimal RFC 4180 reader: rows of fields, quoted fields may hold , " and newlines.
std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
    } else {
      field += c;
    }
  }
  REQUIRE(field.empty());
  REQUIRE(row.empty());
  return rows;
}

std::string config_error(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults give the reference point") {
  const RunConfig cfg = parse_config(json::object());
  const SystemParams ref = testing::reference_point();
  CHECK(cfg.system.omega_m == ref.omega_m);
  CHECK(cfg.system.delta_b1 == ref.delta_b1);
  CHECK(cfg.system.delta_b2 == ref.delta_b2);
  CHECK(cfg.system.g_collective == ref.g_collective);
  CHECK(cfg.run.engine == Engine::Gaussian);
  CHECK(cfg.run.model == ModelKind::Effective);
  CHECK(cfg.thetas == std::vector<double>{0.0});
  CHECK_FALSE(cfg.geometry.has_value());
}

TEST_CASE("sections are parsed") {
  const json doc = json::parse(R"({
    "units": "hz",
    "system": {"omega_m": 2e9, "g": 20e3, "v": 1.5e6, "omega_over_v": 3, "delta_over_a": -0.77,
               "n_spins": 400, "kappa": 1e3, "n_th": 6.8e-5},
    "geometry": {"length_m": 1e-6, "temperature_k": 0.02},
    "run": {"horizon_s": 2e-3, "samples": 11, "theta": [0, 1.5707963267948966], "engine": "fock",
            "model": "squeeze-special", "refine": false, "threads": 3, "hp_fraction": 0.2},
    "fock": {"cutoffs": [10, 12], "richardson": false, "boundary_tolerance": 1e-4, "step_s": 1e-7,
             "adjudicate": true},
    "sweep": {"axes": [{"name": "omega_over_v", "values": [1.5, 2, 3]},
                       {"name": "g_hz", "start": 10e3, "stop": 40e3, "count": 4}]},
    "optimize": {"omega_over_v": 2, "delta_over_a": [-1, 0], "grid": 5},
    "output": {"directory": "somewhere", "csv": false, "json": true, "decibel": true}
  })");
  const RunConfig cfg = parse_config(doc);
  CHECK(to_hz(cfg.system.g_collective) == Approx(20e3));
  CHECK(cfg.system.detuning() == Approx(3.0 * cfg.system.v));
  CHECK(cfg.system.zeeman_offset() == Approx(-0.77 * effective_params(cfg.system).a_coef).epsilon(1e-8));
  CHECK(cfg.system.n_spins == 400);
  CHECK(to_hz(cfg.system.kappa) == Approx(1e3));
  REQUIRE(cfg.geometry.has_value());
  CHECK(cfg.geometry->length == 1e-6);
  CHECK(cfg.geometry->width == device::BeamGeometry{}.width);
  CHECK(cfg.run.horizon == 2e-3);
  CHECK(cfg.thetas.size() == 2);
  CHECK(cfg.run.theta == 0.0);
  CHECK(cfg.run.engine == Engine::Fock);
  CHECK(cfg.run.model == ModelKind::Squeeze);
  CHECK_FALSE(cfg.run.refine);
  CHECK(cfg.threads == 3);
  CHECK(cfg.run.fock.cutoffs == std::vector<int>{10, 12});
  CHECK_FALSE(cfg.run.fock.richardson_check);
  CHECK(cfg.run.fock.boundary_tolerance == 1e-4);
  CHECK(cfg.run.fock.integrator_step == 1e-7);
  CHECK(cfg.fock.adjudicate);
  REQUIRE(cfg.axes.size() == 2);
  CHECK(cfg.axes[1].values == std::vector<double>{10e3, 20e3, 30e3, 40e3});
  CHECK(cfg.bounds.omega_over_v_lo == 2.0);
  CHECK(cfg.bounds.omega_over_v_hi == 2.0);
  CHECK(cfg.bounds.delta_over_a_lo == -1.0);
  CHECK(cfg.optimize_grid == 5);
  CHECK(cfg.output.directory == "somewhere");
  CHECK(cfg.output.json);
  CHECK(cfg.output.decibel);
}

TEST_CASE("absolute frequencies") {
  const RunConfig cfg = parse_config(json::parse(R"({"system": {"delta_b1": 2.002e9, "delta_b2": 2.0019e9}})"));
  CHECK(to_hz(cfg.system.detuning()) == Approx(2e6));
  CHECK(to_hz(cfg.system.zeeman_offset()) == Approx(1e5));
  const RunConfig rel = parse_config(json::parse(R"({"system": {"detuning": 3e6, "zeeman_offset": -500}})"));
  CHECK(to_hz(rel.system.detuning()) == Approx(3e6));
  CHECK(to_hz(rel.system.zeeman_offset()) == Approx(-500.0));
}

TEST_CASE("errors carry their location") {
  CHECK(config_error(json::parse(R"({"system": {"omega_m": 2e9, "gg": 1}})")) == "/system/gg: unknown key");
  CHECK(config_error(json::parse(R"({"extra": 1})")) == "/extra: unknown key");
  CHECK(config_error(json::parse(R"({"units": "rad/s"})")).rfind("/units:", 0) == 0);
  CHECK(config_error(json::parse(R"({"run": {"samples": 1}})")).rfind("/run/samples:", 0) == 0);
  CHECK(config_error(json::parse(R"({"run": {"samples": 2.5}})")).rfind("/run/samples:", 0) == 0);
  CHECK(config_error(json::parse(R"({"run": {"engine": "exact"}})")).rfind("/run/engine:", 0) == 0);
  CHECK(config_error(json::parse(R"({"system": {"g": -1}})")).rfind("/system:", 0) == 0);
  CHECK(config_error(json::parse(R"({"system": {"omega_over_v": 2, "detuning": 1}})")).rfind("/system/", 0) == 0);
  CHECK(config_error(json::parse(R"({"fock": {"cutoffs": [12, 1]}})")).rfind("/fock/cutoffs/1:", 0) == 0);
  CHECK(config_error(json::parse(R"({"sweep": {"axes": [{"name": "mass", "values": [1]}]}})"))
            .rfind("/sweep/axes/0/name:", 0) == 0);
  CHECK(config_error(json::parse(R"({"sweep": {"axes": [{"name": "g_hz", "values": [1, "x"]}]}})"))
            .rfind("/sweep/axes/0/values/1:", 0) == 0);
  CHECK(config_error(json::parse(R"({"optimize": {"delta_over_a": [0, -1]}})")).rfind("/optimize/delta_over_a:", 0) ==
        0);
  CHECK(config_error(json::parse(R"({"geometry": {"length_m": -1}})")).rfind("/geometry:", 0) == 0);
  CHECK(config_error(json::parse(R"({"system": {"omega_over_v": 1, "delta_over_a": -1}})"))
            .rfind("/system/delta_over_a:", 0) == 0);
  CHECK(config_error(json::parse(R"([1, 2])")).rfind("/:", 0) == 0);
}

TEST_CASE("load_config") {
  const auto dir = std::filesystem::temp_directory_path() / "nvsq_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "good.json") << R"({"run": {"horizon_s": 5e-4}})";
    std::ofstream(dir / "broken.json") << R"({"run": )";
  }
  CHECK(load_config(dir / "good.json").run.horizon == 5e-4);
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  try {
    load_config(dir / "broken.json");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("broken.json") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("number formatting") {
  CHECK(report::format_number(0.0) == "0");
  CHECK(report::format_number(-0.0) == "0");
  CHECK(report::format_number(0.25) == "0.25");
  CHECK(report::format_number(1.0 / 12.0) == "0.0833333333333");
  CHECK(report::format_number(2.706e-4) == "0.0002706");
  CHECK(report::format_number(1e-12) == "1e-12");
  CHECK(report::format_number(std::nan("")) == "nan");
  CHECK(report::format_number(-INFINITY) == "-inf");
  CHECK(report::dump_json(json{{"x", 1.0 / 3.0}, {"y", NAN}}) == "{\n  \"x\": 0.333333333333,\n  \"y\": null\n}\n");
}

TEST_CASE("property: CSV fields survive a generic reader") {
  std::mt19937_64 rng(91);
  const std::string alphabet = "ab,\"\n\r x;é";
  for (int draw = 0; draw < 200; ++draw) {
    std::vector<std::string> fields(std::uniform_int_distribution<int>(1, 5)(rng));
    std::string line;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const int len = std::uniform_int_distribution<int>(0, 8)(rng);
      for (int c = 0; c < len; ++c) fields[k] += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
      line += (k ? "," : "") + report::csv_field(fields[k]);
    }
    const auto rows = read_csv(line + "\n");
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0] == fields);
  }
}

TEST_CASE("trace CSV") {
  SqueezingTrace tr;
  tr.layout = ModeLayout::spins();
  tr.times = {0.0, 1e-4};
  tr.variance_theta = {0.25, 0.2};
  tr.variance_opt = {0.25, 0.1};
  tr.theta_opt = {0.0, 1.5};
  tr.occupations = {{0.0, 0.5}, {0.0, 0.5}};
  tr.hp_valid = {true, false};
  std::ostringstream os;
  report::write_trace_csv(os, tr);
  CHECK(os.str() ==
        "t_s,variance_theta,variance_opt,theta_opt,exc_c1,exc_c2,occ_a,occ_b,hp_valid\n"
        "0,0.25,0.25,0,0,0,,,1\n"
        "0.0001,0.2,0.1,1.5,0.5,0.5,,,0\n");
  std::ostringstream db;
  report::write_trace_csv(db, tr, true);
  const auto rows = read_csv(db.str());
  REQUIRE(rows.size() == 3);
  CHECK(std::stod(rows[2][2]) == Approx(10.0 * std::log10(0.4)));
  const json j = report::trace_to_json(tr);
  CHECK(j["occupations"]["c2"][1] == 0.5);
  CHECK(j["hp_valid"][1] == false);
  CHECK(j["first_violation_s"].is_null());
}

TEST_CASE("sweep and device tables") {
  SweepTable t;
  t.axis_names = {"omega_over_v"};
  SweepRow ok;
  ok.coords = {2.0};
  ok.regime = "oscillatory";
  ok.v_min = 1.0 / 12.0;
  ok.hp_valid = true;
  ok.adiabatic = true;
  SweepRow bad;
  bad.coords = {1.0};
  bad.error = "resonance: |omega| = v, \"diverges\"";
  t.rows = {ok, bad};
  std::ostringstream os;
  report::write_sweep_csv(os, t);
  const auto rows = read_csv(os.str());
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.size() == rows[0].size());
  CHECK(rows[0][0] == "omega_over_v");
  CHECK(rows[1][2] == "0.0833333333333");
  CHECK(rows[2][2].empty());
  CHECK(rows[2].back() == bad.error);
  CHECK(os.str().back() == '\n');

  std::ostringstream dev;
  report::write_device_table(dev, device::device_report(device::BeamGeometry{}, 100));
  const auto d = read_csv(dev.str());
  REQUIRE(d.size() == 9);
  CHECK(d[0] == std::vector<std::string>{"quantity", "value", "unit"});
  CHECK(d[3][0] == "f_mech");
}

TEST_CASE("parameter echo") {
  const json j = params_to_json(testing::reference_point());
  CHECK(j["g_hz"].get<double>() == Approx(40e3));
  CHECK(j["detuning_hz"].get<double>() == Approx(2e6));
  CHECK(j["n_spins"] == 100);
}
