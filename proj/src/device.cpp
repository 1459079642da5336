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

#include "nvsq/device.hpp"

#include <cmath>
#include <sstream>

#include "nvsq/errors.hpp"
#include "nvsq/model.hpp"

namespace nvsq::device {

std::vector<std::string> check_geometry(const BeamGeometry& g) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string("beam ") + name + " must be positive");
  };
  positive(g.length, "length");
  positive(g.width, "width");
  positive(g.height, "height");
  positive(g.density, "density");
  positive(g.youngs_modulus, "youngs_modulus");
  positive(g.quality_factor, "quality_factor");
  positive(g.temperature, "temperature");
  std::vector<std::string> warnings;
  if (g.length < 5.0 * std::max(g.width, g.height)) {
    std::ostringstream msg;
    msg << "beam is not slender: L = " << g.length << " m < 5*max(w, h); Euler-Bernoulli estimates are rough";
    warnings.push_back(msg.str());
  }
  return warnings;
}

double estimate_coupling(const BeamGeometry& g) {
  check_geometry(g);
  const double radicand =
      kHbar / (g.length * g.length * g.length * g.width * std::sqrt(g.density * g.youngs_modulus));
  return kTwoPi * kCouplingPrefactorHz * std::sqrt(radicand);
}

double collective_coupling(const BeamGeometry& g, std::int64_t n_spins) {
  if (n_spins < 1) throw ParameterError("n_spins must be at least 1");
  return std::sqrt(static_cast<double>(n_spins)) * estimate_coupling(g);
}

double estimate_mech_frequency(const BeamGeometry& g) {
  check_geometry(g);
  const double beta = kClampedBetaL / g.length;
  const double inertia = g.width * g.height * g.height * g.height / 12.0;
  const double f1 = beta * beta / kTwoPi * std::sqrt(g.youngs_modulus * inertia / (g.density * g.width * g.height));
  return kTwoPi * f1;
}

double bose_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) throw ParameterError("mode frequency must be positive");
  if (temperature < 0.0) throw ParameterError("temperature must be non-negative");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temperature));
}

ThermalDamping thermal_and_damping(const BeamGeometry& g, double omega_m) {
  if (!(g.quality_factor > 0.0)) throw ParameterError("quality_factor must be positive");
  if (!(g.temperature > 0.0)) throw ParameterError("temperature must be positive");
  return {omega_m / g.quality_factor, bose_occupation(omega_m, g.temperature)};
}

DeviceReport device_report(const BeamGeometry& g, std::int64_t n_spins) {
  DeviceReport r;
  r.geometry = g;
  r.n_spins = n_spins;
  r.warnings = check_geometry(g);
  r.g_single = estimate_coupling(g);
  r.g_collective = collective_coupling(g, n_spins);
  r.omega_m = estimate_mech_frequency(g);
  const ThermalDamping td = thermal_and_damping(g, r.omega_m);
  r.kappa = td.kappa;
  r.n_th = td.n_th;
  r.kappa_reference = from_hz(kReferenceKappaHz);
  const ThermalDamping at_ref = thermal_and_damping(g, from_hz(kReferenceMechHz));
  r.kappa_at_reference_mech = at_ref.kappa;
  r.n_th_at_reference_mech = at_ref.n_th;
  return r;
}

}  // namespace nvsq::device
