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

#include <cmath>

#include "nvsq/analytic.hpp"
#include "nvsq/builder.hpp"
#include "nvsq/dynamics.hpp"
#include "nvsq/errors.hpp"
#include "nvsq/observables.hpp"
#include "support/generators.hpp"

using namespace nvsq;
using Catch::Approx;

namespace {

LinearModel damped_oscillator(double freq, double kappa, double n_th) {
  LinearModel m{ModeLayout({{"m", ModeKind::Mechanical}}), Eigen::MatrixXd(2, 2), Eigen::MatrixXd(2, 2), "damped"};
  m.drift << -0.5 * kappa, freq, -freq, -0.5 * kappa;
  m.diffusion = kappa * (2.0 * n_th + 1.0) / 2.0 * Eigen::MatrixXd::Identity(2, 2);
  return m;
}

LinearModel random_lossy_model(testing::Gen& gen) {
  SystemParams p = gen.adiabatic_params();
  p.kappa = from_hz(gen.log_uniform(10.0, 1e4));
  p.n_th = gen.uniform(0.0, 2.0);
  return build_full_model(p);
}

}  // namespace

TEST_CASE("vacuum state") {
  const MomentState s = vacuum_state(ModeLayout::full());
  CHECK(s.time == 0.0);
  CHECK(s.mean.isZero(0.0));
  CHECK(s.cov == 0.5 * Eigen::MatrixXd::Identity(8, 8));
  CHECK(std::abs(min_uncertainty_eigenvalue(s.cov)) < 1e-14);
  for (int k = 0; k < 16; ++k) CHECK(joint_quadrature_variance(s, 0, 1, k * kPi / 8) == Approx(0.25).epsilon(1e-15));
  const Eigen::VectorXd nu = symplectic_eigenvalues(s.cov);
  CHECK((nu.array() - 0.5).abs().maxCoeff() < 1e-14);
}

TEST_CASE("exact propagation preserves purity without diffusion") {
  testing::Gen gen(31);
  for (int draw = 0; draw < 50; ++draw) {
    const LinearModel m = build_full_model(gen.adiabatic_params());
    const MomentState s = propagate_exact(m, vacuum_state(m.layout), gen.uniform(0.0, 1e-3));
    REQUIRE((2.0 * s.cov).determinant() == Approx(1.0).margin(1e-9));
  }
}

TEST_CASE("damped mode relaxes to vacuum") {
  const LinearModel m = damped_oscillator(5.0, 0.7, 0.0);
  testing::Gen gen(32);
  for (int draw = 0; draw < 10; ++draw) {
    const MomentState s = propagate_exact(m, gen.gaussian_state(1, 1.0), 200.0);
    REQUIRE((s.cov - 0.5 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(s.mean.cwiseAbs().maxCoeff() < 1e-12);
  }
  const LinearModel hot = damped_oscillator(5.0, 0.7, 1.5);
  const MomentState s = propagate_exact(hot, vacuum_state(hot.layout), 200.0);
  CHECK(mode_excitation(s, 0) == Approx(1.5).epsilon(1e-10));
}

TEST_CASE("effective model reaches the envelope at a quarter period") {
  const SystemParams p = testing::reference_point();
  const LinearModel m = build_effective_model(p);
  const double lambda_hz = to_hz(effective_params(p).lambda.real());
  const double t = 1.0 / (4.0 * lambda_hz);
  CHECK(t == Approx(2.706e-4).margin(1e-7));
  const MomentState s = propagate_exact(m, vacuum_state(m.layout), t);
  CHECK(joint_quadrature_variance(s, 0, 1, 0.0) == Approx(1.0 / 12.0).margin(1e-12));
}

TEST_CASE("propagation argument checks") {
  const LinearModel m = build_effective_model(testing::reference_point());
  const MomentState v = vacuum_state(m.layout);
  CHECK_THROWS_AS(propagate_exact(m, v, -1e-6), ParameterError);
  const MomentState same = propagate_exact(m, v, 0.0);
  CHECK(same.cov == v.cov);
  CHECK_THROWS_AS(propagate_trace(m, v, 1e-3, 1), ParameterError);
  CHECK_THROWS_AS(propagate_trace(m, v, 0.0, 10), ParameterError);
  CHECK_THROWS_AS(propagate_exact(m, vacuum_state(ModeLayout::full()), 1e-3), LayoutError);
}

TEST_CASE("trace sampling is consistent") {
  testing::Gen gen(33);
  for (int draw = 0; draw < 20; ++draw) {
    const LinearModel m = random_lossy_model(gen);
    const MomentState s0 = vacuum_state(m.layout);
    const double t_end = gen.uniform(1e-4, 1e-3);
    const Trajectory coarse = propagate_trace(m, s0, t_end, 10);
    const Trajectory fine = propagate_trace(m, s0, t_end, 91);
    REQUIRE(coarse.states.size() == 10);
    REQUIRE(fine.states.size() == 91);
    for (int k = 0; k < 10; ++k) {
      const MomentState& a = coarse.states[k];
      const MomentState& b = fine.states[10 * k];
      REQUIRE(a.time == Approx(b.time).epsilon(1e-14));
      const MomentState direct = propagate_exact(m, s0, a.time);
      // exponential-regime draws grow σ by orders of magnitude
      const double scale = std::max(1.0, direct.cov.cwiseAbs().maxCoeff());
      REQUIRE((a.cov - b.cov).cwiseAbs().maxCoeff() < 1e-10 * scale);
      REQUIRE((a.cov - direct.cov).cwiseAbs().maxCoeff() < 1e-10 * scale);
    }
    for (std::size_t k = 1; k < fine.states.size(); ++k) REQUIRE(fine.states[k].time > fine.states[k - 1].time);
  }
}

TEST_CASE("RK4 path converges to the exact path") {
  const SystemParams p = testing::reference_point();
  for (const LinearModel& m : {build_effective_model(p), build_squeeze_model(p)}) {
    const MomentState s0 = vacuum_state(m.layout);
    auto error = [&](int samples) {
      const Trajectory exact = propagate_trace(m, s0, 1e-3, samples);
      const Trajectory rk = propagate_trace(m, s0, 1e-3, samples, TraceOptions{Integrator::Rk4, std::nullopt});
      CHECK(rk.integrator == Integrator::Rk4);
      CHECK(rk.step <= 2.0 * kPi / (20.0 * max_drift_frequency(m.drift)) * (1.0 + 1e-12));
      CHECK(rk.step <= 1e-3 / (samples - 1) * (1.0 + 1e-12));
      double worst = 0.0;
      for (std::size_t k = 0; k < exact.states.size(); ++k) {
        const double scale = exact.states[k].cov.cwiseAbs().maxCoeff();
        worst = std::max(worst, (exact.states[k].cov - rk.states[k].cov).cwiseAbs().maxCoeff() / scale);
      }
      return std::pair{worst, rk.step};
    };
    const auto [coarse, h_coarse] = error(21);
    const auto [fine, h_fine] = error(401);
    CHECK(coarse < 5e-2);
    // fourth order: shrinking the step by r shrinks the error by about r⁴
    const double r = h_coarse / h_fine;
    CHECK(fine < 4.0 * coarse / std::pow(r, 4));
    CHECK(fine < 1e-6);
  }
}

TEST_CASE("mechanical occupation stays small with reference damping") {
  SystemParams p = testing::reference_point();
  p.kappa = from_hz(1e3);
  p.n_th = 6.8e-5;
  const LinearModel m = build_full_model(p);
  const Trajectory tr = propagate_trace(m, vacuum_state(m.layout), 1e-3, 201);
  for (const MomentState& s : tr.states) {
    REQUIRE(mode_excitation(s, 2) < 0.05);
    REQUIRE(mode_excitation(s, 3) < 0.05);
  }
}

TEST_CASE("property: semigroup") {
  testing::Gen gen(34);
  for (int draw = 0; draw < 200; ++draw) {
    const LinearModel m = random_lossy_model(gen);
    const MomentState s0 = gen.gaussian_state(4, 0.5);
    const double t1 = gen.uniform(0.0, 5e-4), t2 = gen.uniform(0.0, 5e-4);
    const MomentState once = propagate_exact(m, s0, t1 + t2);
    const MomentState twice = propagate_exact(m, propagate_exact(m, s0, t1), t2);
    const double scale = std::max(1.0, once.cov.cwiseAbs().maxCoeff());
    REQUIRE((once.cov - twice.cov).cwiseAbs().maxCoeff() <= 1e-9 * scale);
    REQUIRE((once.mean - twice.mean).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, once.mean.cwiseAbs().maxCoeff()));
    REQUIRE(twice.time == Approx(s0.time + t1 + t2));
  }
}

TEST_CASE("property: uncertainty relation along lossy traces") {
  testing::Gen gen(35);
  for (int draw = 0; draw < 200; ++draw) {
    const LinearModel m = random_lossy_model(gen);
    const Trajectory tr = propagate_trace(m, gen.gaussian_state(4, 0.3), gen.uniform(1e-4, 1e-3), 11);
    for (const MomentState& s : tr.states) REQUIRE(min_uncertainty_eigenvalue(s.cov) >= -1e-8);
  }
}

TEST_CASE("property: symplectic eigenvalues are invariant without diffusion") {
  testing::Gen gen(36);
  for (int draw = 0; draw < 200; ++draw) {
    const LinearModel m = build_full_model(gen.adiabatic_params());
    const MomentState s0 = gen.gaussian_state(4, 0.3);
    const Eigen::VectorXd nu0 = symplectic_eigenvalues(s0.cov);
    const MomentState s = propagate_exact(m, s0, gen.uniform(0.0, 1e-3));
    REQUIRE((symplectic_eigenvalues(s.cov) - nu0).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("excitation cap truncates runaway squeezing") {
  const SystemParams p = testing::fast_hopping_point(-2.0);
  const LinearModel m = build_squeeze_model(p);
  const Trajectory tr = propagate_trace(m, vacuum_state(m.layout), 1e-3, 1001, TraceOptions{Integrator::Exact, 10.0});
  REQUIRE(tr.truncated);
  REQUIRE(tr.truncated_at.has_value());
  const double b = effective_params(p).b_coef;
  const double t_cross = std::asinh(std::sqrt(10.0)) / b;
  CHECK(*tr.truncated_at == Approx(t_cross).margin(1e-6));
  CHECK(tr.states.back().time < t_cross);
  CHECK(mode_excitation(tr.states.back(), 0) <= 10.0);
}

TEST_CASE("overflow is reported") {
  const SystemParams p = testing::reference_point(2.0, -2.0);
  const LinearModel m = build_squeeze_model(p);
  CHECK_THROWS_AS(propagate_exact(m, vacuum_state(m.layout), 2000.0 / effective_params(p).b_coef), NumericError);
}

TEST_CASE("drift frequency") {
  const SystemParams p = testing::reference_point();
  CHECK(max_drift_frequency(build_effective_model(p).drift) == Approx(effective_params(p).lambda.real()).epsilon(1e-9));
}
