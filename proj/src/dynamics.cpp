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

#include "nvsq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "nvsq/errors.hpp"
#include "nvsq/observables.hpp"

namespace nvsq {

namespace {

void require_finite(const MomentState& s) {
  if (!s.mean.allFinite() || !s.cov.allFinite()) {
    throw NumericError("moment propagation overflowed at t = " + std::to_string(s.time) +
                       " s; shorten the horizon");
  }
}

void require_dims(const LinearModel& m, const MomentState& s) {
  const auto n = static_cast<Eigen::Index>(m.layout.dim());
  if (m.drift.rows() != n || m.drift.cols() != n || m.diffusion.rows() != n ||
      m.diffusion.cols() != n || s.mean.size() != n || s.cov.rows() != n || s.cov.cols() != n) {
    throw LayoutError("model and state dimensions disagree");
  }
}

bool exceeds_cap(const MomentState& s, const ModeLayout& layout, double cap) {
  for (std::size_t k = 0; k < layout.size(); ++k) {
    if (layout.mode(k).kind == ModeKind::Spin && mode_excitation(s, k) > cap) return true;
  }
  return false;
}

struct Derivative {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

Derivative moment_rhs(const LinearModel& m, const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  Eigen::MatrixXd fc = m.drift * cov;
  return {m.drift * mean, fc + fc.transpose() + m.diffusion};
}

void rk4_step(const LinearModel& m, MomentState& s, double h) {
  const Derivative k1 = moment_rhs(m, s.mean, s.cov);
  const Derivative k2 = moment_rhs(m, s.mean + 0.5 * h * k1.mean, s.cov + 0.5 * h * k1.cov);
  const Derivative k3 = moment_rhs(m, s.mean + 0.5 * h * k2.mean, s.cov + 0.5 * h * k2.cov);
  const Derivative k4 = moment_rhs(m, s.mean + h * k3.mean, s.cov + h * k3.cov);
  s.mean += (h / 6.0) * (k1.mean + 2.0 * k2.mean + 2.0 * k3.mean + k4.mean);
  s.cov += (h / 6.0) * (k1.cov + 2.0 * k2.cov + 2.0 * k3.cov + k4.cov);
}

}  // namespace

MomentState vacuum_state(const ModeLayout& layout) {
  const auto n = static_cast<Eigen::Index>(layout.dim());
  return {0.0, Eigen::VectorXd::Zero(n), 0.5 * Eigen::MatrixXd::Identity(n, n)};
}

double min_uncertainty_eigenvalue(const Eigen::MatrixXd& cov) {
  const Eigen::MatrixXd omega = symplectic_form(static_cast<std::size_t>(cov.rows() / 2));
  const Eigen::MatrixXcd h =
      cov.cast<std::complex<double>>() + std::complex<double>(0.0, 0.5) * omega;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const auto n = cov.rows() / 2;
  const Eigen::MatrixXd omega = symplectic_form(static_cast<std::size_t>(n));
  Eigen::EigenSolver<Eigen::MatrixXd> es(omega * cov, false);
  std::vector<double> mags;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) mags.push_back(std::abs(es.eigenvalues()(k)));
  std::sort(mags.begin(), mags.end());
  Eigen::VectorXd nu(n);
  for (Eigen::Index k = 0; k < n; ++k) nu(k) = 0.5 * (mags[2 * k] + mags[2 * k + 1]);
  return nu;
}

namespace {

/// Van Loan on a short substep, then doubled.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> block_propagator(const Eigen::MatrixXd& f, const Eigen::MatrixXd& d,
                                                             double dt) {
  const auto n = f.rows();
  if (f.isZero(0.0) && d.isZero(0.0))
    return {Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Zero(n, n)};
  const double norm =
      std::max(f.cwiseAbs().colwise().sum().maxCoeff(), d.cwiseAbs().colwise().sum().maxCoeff());
  int doublings = 0;
  double h = dt;
  while (norm * h > 4.0 && doublings < 200) {
    h *= 0.5;
    ++doublings;
  }

  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = f * h;
  aug.topRightCorner(n, n) = d * h;
  aug.bottomRightCorner(n, n) = -f.transpose() * h;
  const Eigen::MatrixXd e = aug.exp();

  Eigen::MatrixXd transfer = e.topLeftCorner(n, n);
  // upper-right block is ∫ e^{F(h−s)} D e^{−Fᵀs} ds; right-multiplying by e^{Fᵀh}
  // gives the noise integral
  Eigen::MatrixXd noise = e.topRightCorner(n, n) * transfer.transpose();
  for (int k = 0; k < doublings; ++k) {
    noise = transfer * noise * transfer.transpose() + noise;
    noise = 0.5 * (noise + noise.transpose());
    transfer = transfer * transfer;
  }
  return {transfer, 0.5 * (noise + noise.transpose())};
}

/// Mode groups linked by drift or diffusion, as phase-space indices.
std::vector<std::vector<Eigen::Index>> coupled_blocks(const LinearModel& model) {
  const std::size_t modes = model.layout.size();
  std::vector<std::size_t> parent(modes);
  for (std::size_t k = 0; k < modes; ++k) parent[k] = k;
  auto root = [&](std::size_t k) {
    while (parent[k] != k) k = parent[k] = parent[parent[k]];
    return k;
  };
  const auto dim = static_cast<Eigen::Index>(2 * modes);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (model.drift(i, j) != 0.0 || model.diffusion(i, j) != 0.0)
        parent[root(static_cast<std::size_t>(i / 2))] = root(static_cast<std::size_t>(j / 2));
    }
  }
  std::vector<std::vector<Eigen::Index>> blocks;
  std::vector<std::ptrdiff_t> slot(modes, -1);
  for (std::size_t k = 0; k < modes; ++k) {
    const std::size_t r = root(k);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::ptrdiff_t>(blocks.size());
      blocks.emplace_back();
    }
    auto& b = blocks[static_cast<std::size_t>(slot[r])];
    b.push_back(static_cast<Eigen::Index>(ModeLayout::x(k)));
    b.push_back(static_cast<Eigen::Index>(ModeLayout::p(k)));
  }
  return blocks;
}

}  // namespace

Propagator make_propagator(const LinearModel& model, double dt) {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw ParameterError("propagation time must be >= 0");
  const auto n = static_cast<Eigen::Index>(model.layout.dim());

  Propagator prop;
  prop.dt = dt;
  prop.transfer = Eigen::MatrixXd::Zero(n, n);
  prop.noise = Eigen::MatrixXd::Zero(n, n);
  for (const auto& idx : coupled_blocks(model)) {
    const auto [t, q] = block_propagator(model.drift(idx, idx), model.diffusion(idx, idx), dt);
    prop.transfer(idx, idx) = t;
    prop.noise(idx, idx) = q;
  }
  if (!prop.transfer.allFinite() || !prop.noise.allFinite())
    throw NumericError("matrix exponential overflowed for dt = " + std::to_string(dt) + " s");
  return prop;
}

MomentState apply(const Propagator& prop, const MomentState& s) {
  MomentState out;
  out.time = s.time + prop.dt;
  out.mean = prop.transfer * s.mean;
  Eigen::MatrixXd cov = prop.transfer * s.cov * prop.transfer.transpose() + prop.noise;
  out.cov = 0.5 * (cov + cov.transpose());
  require_finite(out);
  return out;
}

MomentState propagate_exact(const LinearModel& model, const MomentState& s0, double t) {
  require_dims(model, s0);
  if (t < 0.0) throw ParameterError("propagation time must be >= 0");
  if (t == 0.0) return s0;
  return apply(make_propagator(model, t), s0);
}

double max_drift_frequency(const Eigen::MatrixXd& drift) {
  if (drift.size() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(drift, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Trajectory propagate_trace(const LinearModel& model, const MomentState& s0, double t_end,
                           int n_samples, const TraceOptions& opts) {
  require_dims(model, s0);
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be positive");
  if (n_samples < 2) throw ParameterError("n_samples must be at least 2");

  const double dt = t_end / (n_samples - 1);
  Trajectory traj;
  traj.description = model.description;
  traj.integrator = opts.integrator;
  traj.states.reserve(static_cast<std::size_t>(n_samples));
  traj.states.push_back(s0);

  Propagator prop;
  int substeps = 1;
  if (opts.integrator == Integrator::Exact) {
    prop = make_propagator(model, dt);
    traj.step = dt;
  } else {
    const double fmax = max_drift_frequency(model.drift);
    const double hmax = fmax > 0.0 ? kTwoPi / (20.0 * fmax) : dt;
    substeps = std::max(1, static_cast<int>(std::ceil(dt / hmax - 1e-12)));
    traj.step = dt / substeps;
  }

  MomentState s = s0;
  for (int k = 1; k < n_samples; ++k) {
    if (opts.integrator == Integrator::Exact) {
      s = apply(prop, s);
    } else {
      for (int j = 0; j < substeps; ++j) rk4_step(model, s, traj.step);
      s.cov = 0.5 * (s.cov + s.cov.transpose());
      require_finite(s);
    }
    s.time = s0.time + k * dt;
    if (opts.excitation_cap && exceeds_cap(s, model.layout, *opts.excitation_cap)) {
      traj.truncated = true;
      traj.truncated_at = s.time;
      break;
    }
    traj.states.push_back(s);
  }
  return traj;
}

}  // namespace nvsq
