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

#include "nvsq/builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nvsq/errors.hpp"

namespace nvsq {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

void require_mode(std::size_t k, std::size_t n) {
  if (k >= n) throw LayoutError("mode index " + std::to_string(k) + " outside layout");
}

double safe_ratio(double num, double den) {
  if (num == 0.0) return 0.0;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace

Eigen::MatrixXd symplectic_form(std::size_t n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

LadderEquations::LadderEquations(std::size_t n_modes)
    : direct_(Eigen::MatrixXcd::Zero(n_modes, n_modes)),
      conj_(Eigen::MatrixXcd::Zero(n_modes, n_modes)) {}

void LadderEquations::add(std::size_t k, std::size_t l, cd coef) {
  require_mode(k, direct_.rows());
  require_mode(l, direct_.rows());
  direct_(k, l) += coef;
}

void LadderEquations::add_conj(std::size_t k, std::size_t l, cd coef) {
  require_mode(k, conj_.rows());
  require_mode(l, conj_.rows());
  conj_(k, l) += coef;
}

Eigen::MatrixXd LadderEquations::quadrature_drift() const {
  const auto n = static_cast<std::size_t>(direct_.rows());
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t l = 0; l < n; ++l) {
      // α c_l with c = (x + ip)/√2
      const cd a = direct_(k, l);
      f(2 * k, 2 * l) += a.real();
      f(2 * k, 2 * l + 1) -= a.imag();
      f(2 * k + 1, 2 * l) += a.imag();
      f(2 * k + 1, 2 * l + 1) += a.real();
      // β c_l† with c† = (x − ip)/√2
      const cd b = conj_(k, l);
      f(2 * k, 2 * l) += b.real();
      f(2 * k, 2 * l + 1) += b.imag();
      f(2 * k + 1, 2 * l) += b.imag();
      f(2 * k + 1, 2 * l + 1) -= b.real();
    }
  }
  return f;
}

LinearModel build_full_model(const SystemParams& p) {
  check_params(p);
  const double w = p.detuning();
  const double delta = p.zeeman_offset();
  const double g = p.g_collective;
  constexpr std::size_t c1 = 0, c2 = 1, a = 2, b = 3;

  LadderEquations eq(4);
  eq.add(c1, a, -kI * g);
  eq.add(c2, c2, -kI * delta);
  eq.add_conj(c2, b, -kI * g);
  eq.add(a, a, kI * w - 0.5 * p.kappa);
  eq.add(a, c1, -kI * g);
  eq.add(a, b, -kI * p.v);
  eq.add(b, b, kI * w - 0.5 * p.kappa);
  eq.add_conj(b, c2, -kI * g);
  eq.add(b, a, -kI * p.v);

  LinearModel m{ModeLayout::full(), eq.quadrature_drift(), Eigen::MatrixXd::Zero(8, 8),
                "full four-mode model (c1, c2, a, b), frame rotating at Delta_B1"};
  const double d = 0.5 * p.kappa * (2.0 * p.n_th + 1.0);
  for (std::size_t k = ModeLayout::x(a); k <= ModeLayout::p(b); ++k) m.diffusion(k, k) = d;
  return m;
}

LinearModel build_effective_model(const EffectiveParams& e) {
  LadderEquations eq(2);
  eq.add(0, 0, -kI * e.a_coef);
  eq.add_conj(0, 1, -kI * e.b_coef);
  eq.add(1, 1, -kI * (e.a_coef + e.delta));
  eq.add_conj(1, 0, -kI * e.b_coef);
  return {ModeLayout::spins(), eq.quadrature_drift(), Eigen::MatrixXd::Zero(4, 4),
          "eliminated two-mode model A c1'c1 + (A+Delta) c2'c2 + B(c1c2 + h.c.)"};
}

LinearModel build_effective_model(const SystemParams& p) {
  check_params(p);
  return build_effective_model(effective_params(p));
}

LinearModel build_squeeze_model(const SystemParams& p) {
  check_params(p);
  const double b = effective_params(p).b_coef;
  LadderEquations eq(2);
  eq.add_conj(0, 1, -kI * b);
  eq.add_conj(1, 0, -kI * b);
  return {ModeLayout::spins(), eq.quadrature_drift(), Eigen::MatrixXd::Zero(4, 4),
          "pure pair-creation model B(c1c2 + h.c.)"};
}

NormalModeModel normal_mode_transform(const SystemParams& p) {
  const LinearModel full = build_full_model(p);
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(8, 8);
  t(0, 0) = t(1, 1) = t(2, 2) = t(3, 3) = 1.0;
  // ã = (a + b)/√2, b̃ = (a − b)/√2 on both quadratures
  for (int q = 0; q < 2; ++q) {
    t(4 + q, 4 + q) = r;
    t(4 + q, 6 + q) = r;
    t(6 + q, 4 + q) = r;
    t(6 + q, 6 + q) = -r;
  }
  NormalModeModel out{
      {ModeLayout({{"c1", ModeKind::Spin},
                   {"c2", ModeKind::Spin},
                   {"a_plus", ModeKind::Mechanical},
                   {"b_minus", ModeKind::Mechanical}}),
       t * full.drift * t.transpose(), t * full.diffusion * t.transpose(),
       "full model in the phonon normal-mode basis"},
      t,
      p.omega_m + p.v,
      p.omega_m - p.v,
      p.g_collective * r};
  return out;
}

AdiabaticityReport adiabaticity_report(const SystemParams& p) {
  const double w = p.detuning();
  const double sum = std::abs(w + p.v);
  const double diff = std::abs(w - p.v);
  AdiabaticityReport rep;
  rep.g_over_sum = safe_ratio(p.g_collective, sum);
  rep.g_over_diff = safe_ratio(p.g_collective, diff);
  rep.kappa_over_sum = safe_ratio(p.kappa, sum);
  rep.kappa_over_diff = safe_ratio(p.kappa, diff);
  rep.worst = std::max({rep.g_over_sum, rep.g_over_diff, rep.kappa_over_sum, rep.kappa_over_diff});
  rep.adiabatic = rep.worst <= AdiabaticityReport::kThreshold;
  return rep;
}

}  // namespace nvsq
