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

/// Serialisation of traces, tables and summaries. CSV follows RFC 4180
/// (dot decimal separator, quoted text fields when needed, newline after the
/// last row); numbers carry 12 significant digits.

#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "nvsq/builder.hpp"
#include "nvsq/device.hpp"
#include "nvsq/observables.hpp"
#include "nvsq/sweep.hpp"

namespace nvsq::report {

inline constexpr std::string_view kTraceHeader =
    "t_s,variance_theta,variance_opt,theta_opt,exc_c1,exc_c2,occ_a,occ_b,hp_valid";

std::string format_number(double x);
std::string csv_field(std::string_view text);

/// Variances are written as dB relative to vacuum when `decibel` is set.
void write_trace_csv(std::ostream& os, const SqueezingTrace& trace, bool decibel = false);
nlohmann::json trace_to_json(const SqueezingTrace& trace, bool decibel = false);

void write_sweep_csv(std::ostream& os, const SweepTable& table);
void write_device_table(std::ostream& os, const device::DeviceReport& rep);
nlohmann::json device_to_json(const device::DeviceReport& rep);
nlohmann::json adiabaticity_to_json(const AdiabaticityReport& rep);

/// Numbers rounded to 12 significant digits so that dumps are stable.
std::string dump_json(const nlohmann::json& j);

}  // namespace nvsq::report
