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

#include "nvsq/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "nvsq/builder.hpp"
#include "nvsq/errors.hpp"

namespace nvsq {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ParameterError(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void check_params(const SystemParams& p) {
  require(finite(p.omega_m) && finite(p.delta_b1) && finite(p.delta_b2) &&
              finite(p.g_collective) && finite(p.v) && finite(p.kappa) && finite(p.n_th),
          "system parameters must be finite");
  require(p.omega_m > 0.0, "omega_m must be positive");
  require(p.n_spins >= 1, "n_spins must be at least 1");
  require(p.g_collective >= 0.0, "g_collective must be non-negative");
  require(p.v >= 0.0, "v must be non-negative");
  require(p.kappa >= 0.0, "kappa must be non-negative");
  require(p.n_th >= 0.0, "n_th must be non-negative");
}

SystemParams from_ratios(const RatioSpec& r) {
  SystemParams p;
  p.omega_m = from_hz(r.omega_m_hz);
  p.g_collective = from_hz(r.g_hz);
  p.v = from_hz(r.v_hz);
  p.n_spins = r.n_spins;
  p.kappa = from_hz(r.kappa_hz);
  p.n_th = r.n_th;
  p.delta_b1 = p.omega_m + r.omega_over_v * p.v;
  p.delta_b2 = p.delta_b1;
  if (r.delta_over_a != 0.0) p = with_zeeman_offset_ratio(p, r.delta_over_a);
  return p;
}

SystemParams with_detuning_ratio(SystemParams p, double ratio) {
  const double delta = p.zeeman_offset();
  p.delta_b1 = p.omega_m + ratio * p.v;
  p.delta_b2 = p.delta_b1 - delta;
  return p;
}

SystemParams with_zeeman_offset_ratio(SystemParams p, double ratio) {
  const double a = effective_params(p).a_coef;
  p.delta_b2 = p.delta_b1 - ratio * a;
  return p;
}

ModeLayout::ModeLayout(std::vector<Mode> modes) : modes_(std::move(modes)) {
  if (modes_.empty()) throw LayoutError("layout needs at least one mode");
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    for (std::size_t l = 0; l < k; ++l) {
      if (modes_[k].label == modes_[l].label)
        throw LayoutError("duplicate mode label '" + modes_[k].label + "'");
    }
  }
}

ModeLayout ModeLayout::full() {
  return ModeLayout({{"c1", ModeKind::Spin},
                     {"c2", ModeKind::Spin},
                     {"a", ModeKind::Mechanical},
                     {"b", ModeKind::Mechanical}});
}

ModeLayout ModeLayout::spins() {
  return ModeLayout({{"c1", ModeKind::Spin}, {"c2", ModeKind::Spin}});
}

const Mode& ModeLayout::mode(std::size_t k) const {
  if (k >= modes_.size()) {
    throw LayoutError("mode index " + std::to_string(k) + " outside layout of " +
                      std::to_string(modes_.size()) + " modes");
  }
  return modes_[k];
}

std::size_t ModeLayout::index(std::string_view label) const {
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    if (modes_[k].label == label) return k;
  }
  throw LayoutError("unknown mode '" + std::string(label) + "'");
}

bool ModeLayout::contains(std::string_view label) const {
  return std::any_of(modes_.begin(), modes_.end(),
                     [&](const Mode& m) { return m.label == label; });
}

bool ModeLayout::operator==(const ModeLayout& other) const {
  if (modes_.size() != other.modes_.size()) return false;
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    if (modes_[k].label != other.modes_[k].label || modes_[k].kind != other.modes_[k].kind)
      return false;
  }
  return true;
}

EffectiveParams make_effective(double a_coef, double b_coef, double delta) {
  EffectiveParams e;
  e.a_coef = a_coef;
  e.b_coef = b_coef;
  e.delta = delta;
  const double disc = a_coef * a_coef - b_coef * b_coef;
  e.lambda = disc >= 0.0 ? std::complex<double>(std::sqrt(disc), 0.0)
                         : std::complex<double>(0.0, std::sqrt(-disc));
  return e;
}

EffectiveParams effective_params(const SystemParams& p) {
  const double w = p.detuning();
  const double scale = std::max(std::abs(w), p.v);
  if (std::abs(std::abs(w) - p.v) <= kResonanceTolerance * scale) {
    std::ostringstream msg;
    msg << "resonance: |omega| = v (omega/2pi = " << to_hz(w) << " Hz, v/2pi = " << to_hz(p.v)
        << " Hz); the eliminated model diverges";
    throw ResonanceError(msg.str());
  }
  const double g2 = p.g_collective * p.g_collective;
  const double denom = (w - p.v) * (w + p.v);
  return make_effective(w * g2 / denom, p.v * g2 / denom, p.zeeman_offset());
}

std::vector<Warning> validate(const SystemParams& p) {
  std::vector<Warning> out;
  const auto rep = adiabaticity_report(p);
  const double w = p.detuning();
  if (std::abs(std::abs(w) - p.v) <= kResonanceTolerance * std::max(std::abs(w), p.v) || !std::isfinite(rep.worst)) {
    out.push_back({"resonance", "|omega| = v: adiabatic elimination is undefined"});
  } else if (rep.g_over_sum > AdiabaticityReport::kThreshold ||
             rep.g_over_diff > AdiabaticityReport::kThreshold) {
    std::ostringstream msg;
    msg << "g/|omega-v| = " << rep.g_over_diff << ", g/|omega+v| = " << rep.g_over_sum
        << " exceed " << AdiabaticityReport::kThreshold << "; elimination is not adiabatic";
    out.push_back({"adiabaticity", msg.str()});
  }
  if (p.kappa > 0.0 && p.kappa >= p.g_collective) {
    out.push_back({"damping", "kappa >= g: mechanical loss is not small against the coupling"});
  }
  if (p.n_th > 1.0) {
    out.push_back({"thermal", "n_th > 1: thermal phonons are not negligible"});
  }
  return out;
}

}  // namespace nvsq
