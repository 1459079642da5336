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

/// Subcommand bodies of the `nvsq` tool. Each writes its files below
/// cfg.output.directory, prints a short human summary to `out` and returns
/// the process exit code.

#include <exception>
#include <ostream>
#include <string_view>

#include "nvsq/config.hpp"

namespace nvsq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitHpInvalid = 4;

std::string_view version();

/// Maps an exception to the documented exit code.
int exit_code(const std::exception& e);

int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_compare(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_optimize(const RunConfig& cfg, std::ostream& out);
int cmd_device(const RunConfig& cfg, std::ostream& out);
int cmd_oracle(const RunConfig& cfg, std::ostream& out);

/// Maximum |full − effective| variance deviation tolerated by `compare`.
inline constexpr double kCompareTolerance = 0.02;

}  // namespace nvsq::cli
