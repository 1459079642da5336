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

/// Run configuration: one JSON document with `units`, `system`,
/// `geometry`, `run`, `fock`, `sweep`, `optimize` and `output` sections.
/// Frequencies are given in Hz and converted to rad/s on load. Unknown keys
/// are rejected with their JSON-pointer location.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvsq/device.hpp"
#include "nvsq/model.hpp"
#include "nvsq/sweep.hpp"

namespace nvsq {

struct FockOptions {
  std::vector<int> cutoffs;
  bool richardson = true;
  double boundary_tolerance = 1e-6;
  double step = 0.0;
  bool dissipation = false;
  bool adjudicate = false;
};

struct OutputOptions {
  std::filesystem::path directory = "out";
  bool csv = true;
  bool json = false;
  bool decibel = false;
};

struct RunConfig {
  SystemParams system;
  std::optional<device::BeamGeometry> geometry;
  RunSettings run;
  std::vector<double> thetas{0.0};
  unsigned threads = 1;
  FockOptions fock;
  std::vector<SweepAxis> axes;
  OptimizeBounds bounds;
  int optimize_grid = 9;
  OutputOptions output;
};

/// Throws ConfigError with a location-precise message.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// SystemParams back in Hz, for echoing into reports.
nlohmann::json params_to_json(const SystemParams& p);

}  // namespace nvsq
