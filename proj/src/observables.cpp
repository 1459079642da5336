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

#include "nvsq/observables.hpp"

#include <algorithm>
#include <cmath>

#include "nvsq/errors.hpp"

namespace nvsq {

namespace {

void require_pair(const MomentState& s, std::size_t i, std::size_t j) {
  const auto n = static_cast<std::size_t>(s.mean.size() / 2);
  if (i >= n || j >= n) throw LayoutError("mode index outside the state");
  if (i == j) throw LayoutError("joint quadrature needs two distinct modes");
}

double quadratic_form(const MomentState& s, const Eigen::VectorXd& l) {
  return l.dot(s.cov * l);
}

Eigen::VectorXd linear_form(Eigen::Index dim, std::size_t i, std::size_t j, double ci, double si,
                            double cj, double sj) {
  Eigen::VectorXd l = Eigen::VectorXd::Zero(dim);
  l(ModeLayout::x(i)) += ci;
  l(ModeLayout::p(i)) += si;
  l(ModeLayout::x(j)) += cj;
  l(ModeLayout::p(j)) += sj;
  return l;
}

double wrap_half_turn(double theta) {
  double t = std::fmod(theta, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t -= kPi;
  return t;
}

MomentState measured_state(const MomentState& s, const TraceSettings& settings) {
  if (settings.mode_phase == 0.0) return s;
  const std::size_t modes[2] = {settings.mode_i, settings.mode_j};
  return rotate_modes(s, modes, settings.mode_phase);
}

}  // namespace

double joint_quadrature_variance(const MomentState& s, std::size_t i, std::size_t j, double theta) {
  require_pair(s, i, j);
  const double c = 0.5 * std::cos(theta);
  const double sn = -0.5 * std::sin(theta);
  return quadratic_form(s, linear_form(s.mean.size(), i, j, c, sn, c, sn));
}

double joint_quadrature_variance(const MomentState& s, const ModeLayout& layout,
                                 std::string_view mode_i, std::string_view mode_j, double theta) {
  return joint_quadrature_variance(s, layout.index(mode_i), layout.index(mode_j), theta);
}

OptimalAngle optimal_angle(const MomentState& s, std::size_t i, std::size_t j) {
  require_pair(s, i, j);
  const auto xi = ModeLayout::x(i), pi = ModeLayout::p(i);
  const auto xj = ModeLayout::x(j), pj = ModeLayout::p(j);
  const Eigen::MatrixXd& c = s.cov;
  const double sxx = c(xi, xi) + c(xj, xj) + 2.0 * c(xi, xj);
  const double spp = c(pi, pi) + c(pj, pj) + 2.0 * c(pi, pj);
  const double sxp = c(xi, pi) + c(xi, pj) + c(xj, pi) + c(xj, pj);
  // V(θ) = ¼[m + a·cos2θ + b·sin2θ]
  const double m = 0.5 * (sxx + spp);
  const double a = 0.5 * (sxx - spp);
  const double b = -sxp;
  const double r = std::hypot(a, b);
  OptimalAngle out;
  out.variance = 0.25 * (m - r);
  out.theta = r <= 1e-14 * std::abs(m) ? 0.0 : wrap_half_turn(0.5 * std::atan2(-b, -a));
  return out;
}

double mode_excitation(const MomentState& s, std::size_t k) {
  const auto x = ModeLayout::x(k), p = ModeLayout::p(k);
  if (static_cast<Eigen::Index>(p) >= s.mean.size()) throw LayoutError("mode index outside the state");
  return 0.5 * (s.cov(x, x) + s.cov(p, p) - 1.0) + 0.5 * (s.mean(x) * s.mean(x) + s.mean(p) * s.mean(p));
}

MomentState rotate_modes(const MomentState& s, std::span<const std::size_t> modes, double phase) {
  const auto dim = s.mean.size();
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(dim, dim);
  const double c = std::cos(phase), sn = std::sin(phase);
  for (std::size_t k : modes) {
    const auto x = ModeLayout::x(k), p = ModeLayout::p(k);
    if (static_cast<Eigen::Index>(p) >= dim) throw LayoutError("mode index outside the state");
    // e^{iφ}(x + ip) = (x cosφ − p sinφ) + i(x sinφ + p cosφ)
    t(x, x) = c;
    t(x, p) = -sn;
    t(p, x) = sn;
    t(p, p) = c;
  }
  MomentState out = s;
  out.mean = t * s.mean;
  out.cov = t * s.cov * t.transpose();
  return out;
}

double epr_witness(const MomentState& s, std::size_t i, std::size_t j, double theta) {
  require_pair(s, i, j);
  const double c = 0.5 * std::cos(theta), sn = 0.5 * std::sin(theta);
  const auto dim = s.mean.size();
  const double sum = quadratic_form(s, linear_form(dim, i, j, c, -sn, c, -sn));
  const double diff = quadratic_form(s, linear_form(dim, i, j, sn, c, -sn, -c));
  return sum + diff;
}

double SqueezingTrace::max_spin_excitation(std::size_t t) const {
  double worst = 0.0;
  for (std::size_t k = 0; k < layout.size(); ++k) {
    if (layout.mode(k).kind == ModeKind::Spin) worst = std::max(worst, occupations[k][t]);
  }
  return worst;
}

SqueezingTrace make_squeezing_trace(std::span<const MomentState> states, const ModeLayout& layout,
                                    const TraceSettings& settings) {
  SqueezingTrace tr;
  tr.layout = layout;
  tr.settings = settings;
  tr.occupations.assign(layout.size(), {});
  for (const MomentState& raw : states) {
    const MomentState s = measured_state(raw, settings);
    tr.times.push_back(raw.time);
    tr.variance_theta.push_back(joint_quadrature_variance(s, settings.mode_i, settings.mode_j, settings.theta));
    const OptimalAngle opt = optimal_angle(s, settings.mode_i, settings.mode_j);
    tr.variance_opt.push_back(opt.variance);
    tr.theta_opt.push_back(opt.theta);
    for (std::size_t k = 0; k < layout.size(); ++k) tr.occupations[k].push_back(mode_excitation(raw, k));
  }
  hp_check(tr, settings.n_spins, settings.hp_fraction);
  return tr;
}

SqueezingTrace make_squeezing_trace(const Trajectory& traj, const ModeLayout& layout,
                                    const TraceSettings& settings) {
  return make_squeezing_trace(std::span<const MomentState>(traj.states), layout, settings);
}

void hp_check(SqueezingTrace& trace, double n_spins, double hp_fraction) {
  trace.settings.n_spins = n_spins;
  trace.settings.hp_fraction = hp_fraction;
  trace.hp_valid.assign(trace.size(), true);
  trace.first_violation.reset();
  const double limit = hp_fraction * n_spins;
  for (std::size_t t = 0; t < trace.size(); ++t) {
    if (trace.max_spin_excitation(t) > limit) {
      trace.hp_valid[t] = false;
      if (!trace.first_violation) trace.first_violation = trace.times[t];
    }
  }
}

namespace {

/// Golden-section polish on [t_{k−1}, t_{k+1}] with exact re-propagation.
MinimumVariance polish(const SqueezingTrace& trace, std::size_t k, const Refinement& refine) {
  MinimumVariance out{trace.times[k], trace.variance_opt[k], trace.theta_opt[k], k};
  const double lo = trace.times[k == 0 ? 0 : k - 1];
  const double hi = trace.times[std::min(k + 1, trace.size() - 1)];
  const double t0 = refine.initial.time;
  const double scale = std::max(std::abs(out.time), hi - lo);
  const double tol = refine.relative_tolerance * scale;

  auto evaluate = [&](double t) {
    const MomentState s = measured_state(propagate_exact(*refine.model, refine.initial, t - t0), trace.settings);
    return std::pair{optimal_angle(s, trace.settings.mode_i, trace.settings.mode_j), s};
  };

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = evaluate(x1).first.variance, f2 = evaluate(x2).first.variance;
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = evaluate(x1).first.variance;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = evaluate(x2).first.variance;
    }
  }
  const double t_star = 0.5 * (a + b);
  const auto [opt, state] = evaluate(t_star);
  double worst = 0.0;
  for (std::size_t m = 0; m < trace.layout.size(); ++m) {
    if (trace.layout.mode(m).kind == ModeKind::Spin) worst = std::max(worst, mode_excitation(state, m));
  }
  const bool valid = worst <= trace.settings.hp_fraction * trace.settings.n_spins;
  if (valid && opt.variance < out.variance) {
    out.time = t_star;
    out.variance = opt.variance;
    out.theta = opt.theta;
  }
  return out;
}

/// Vertex of the parabola through the samples around k.
double parabolic_estimate(const SqueezingTrace& trace, std::size_t k) {
  const auto& v = trace.variance_opt;
  if (k == 0 || k + 1 >= trace.size() || !trace.hp_valid[k - 1] || !trace.hp_valid[k + 1]) return v[k];
  const double curv = v[k - 1] - 2.0 * v[k] + v[k + 1];
  if (!(curv > 0.0)) return v[k];
  const double slope = 0.5 * (v[k + 1] - v[k - 1]);
  return v[k] - 0.5 * slope * slope / curv;
}

}  // namespace

MinimumVariance find_min_variance(const SqueezingTrace& trace, const Refinement* refine) {
  if (trace.empty()) throw EmptyTraceError("cannot search an empty trace");
  const auto& v = trace.variance_opt;
  const auto& ok = trace.hp_valid;

  // Local minima of the valid samples; plateaus keep every member.
  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (!ok[k]) continue;
    const bool left = k == 0 || !ok[k - 1] || v[k] <= v[k - 1];
    const bool right = k + 1 == trace.size() || !ok[k + 1] || v[k] <= v[k + 1];
    if (left && right) candidates.push_back(k);
  }
  if (candidates.empty()) throw HpInvalidError("no sample satisfies the Holstein-Primakoff limit");

  constexpr std::size_t kMaxPolished = 16;
  std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  if (candidates.size() > kMaxPolished) candidates.resize(kMaxPolished);
  std::sort(candidates.begin(), candidates.end());

  const bool polishing = refine != nullptr && refine->model != nullptr && trace.size() >= 2;
  std::vector<MinimumVariance> found;
  std::vector<double> score;
  for (std::size_t k : candidates) {
    if (polishing) {
      found.push_back(polish(trace, k, *refine));
      score.push_back(found.back().variance);
    } else {
      found.push_back({trace.times[k], v[k], trace.theta_opt[k], k});
      score.push_back(parabolic_estimate(trace, k));
    }
  }

  // Periodic minima of equal depth resolve to the earliest.
  const double best = *std::min_element(score.begin(), score.end());
  const double tie = kMinimumTieTolerance * std::max(std::abs(best), 1e-300);
  for (std::size_t c = 0; c < found.size(); ++c) {
    if (score[c] <= best + tie) return found[c];
  }
  return found.front();
}

double to_decibel(double variance) { return 10.0 * std::log10(variance / 0.25); }

}  // namespace nvsq
