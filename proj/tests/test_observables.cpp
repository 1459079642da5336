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

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "nvsq/analytic.hpp"
#include "nvsq/builder.hpp"
#include "nvsq/dynamics.hpp"
#include "nvsq/errors.hpp"
#include "nvsq/observables.hpp"
#include "support/generators.hpp"

using namespace nvsq;
using Catch::Approx;

namespace {

SqueezingTrace effective_trace(const SystemParams& p, double horizon, int samples, TraceSettings ts = {}) {
  const LinearModel m = build_effective_model(p);
  ts.n_spins = static_cast<double>(p.n_spins);
  return make_squeezing_trace(propagate_trace(m, vacuum_state(m.layout), horizon, samples), m.layout, ts);
}

MomentState squeezed_pair(double bt) {
  // exp(−iBt(c1c2 + h.c.)) on vacuum, with B = 1
  SystemParams p = testing::reference_point(2.0, -2.0);
  const double b = effective_params(p).b_coef;
  const LinearModel m = build_squeeze_model(p);
  return propagate_exact(m, vacuum_state(m.layout), bt / b);
}

}  // namespace

TEST_CASE("joint quadrature variance") {
  const MomentState vac = vacuum_state(ModeLayout::full());
  for (double th : {0.0, 0.3, 1.0, 2.5}) CHECK(joint_quadrature_variance(vac, 0, 1, th) == Approx(0.25).margin(1e-15));
  CHECK(joint_quadrature_variance(vac, ModeLayout::full(), "c1", "b", 0.7) == Approx(0.25).margin(1e-15));
  CHECK_THROWS_AS(joint_quadrature_variance(vac, ModeLayout::full(), "c1", "q", 0.0), LayoutError);
  CHECK_THROWS_AS(joint_quadrature_variance(vac, 1, 1, 0.0), LayoutError);
  CHECK_THROWS_AS(joint_quadrature_variance(vac, 0, 4, 0.0), LayoutError);

  const std::size_t both[] = {0, 1};
  const MomentState sq = rotate_modes(squeezed_pair(1.0), both, kPi / 4.0);
  CHECK(joint_quadrature_variance(sq, 0, 1, kPi / 2.0) == Approx(0.25 * std::exp(-2.0)).margin(1e-12));
  CHECK(0.25 * std::exp(-2.0) == Approx(0.0338).margin(1e-4));

  const SystemParams p = testing::reference_point();
  const LinearModel m = build_effective_model(p);
  const MomentState at = propagate_exact(m, vacuum_state(m.layout), analytic::first_minimum_time(p));
  CHECK(joint_quadrature_variance(at, 0, 1, 0.0) == Approx(1.0 / 12.0).margin(1e-12));
}

TEST_CASE("optimal angle") {
  const OptimalAngle vac = optimal_angle(vacuum_state(ModeLayout::spins()), 0, 1);
  CHECK(vac.variance == Approx(0.25).margin(1e-15));
  CHECK(vac.theta == 0.0);

  const std::size_t both[] = {0, 1};
  const MomentState sq = rotate_modes(squeezed_pair(0.8), both, kPi / 4.0);
  const OptimalAngle o = optimal_angle(sq, 0, 1);
  CHECK(o.theta == Approx(kPi / 2.0).margin(1e-9));
  CHECK(o.variance == Approx(0.25 * std::exp(-1.6)).margin(1e-12));
  const OptimalAngle raw = optimal_angle(squeezed_pair(0.8), 0, 1);
  CHECK(raw.theta == Approx(3.0 * kPi / 4.0).margin(1e-9));

  const SystemParams p = testing::reference_point();
  const LinearModel m = build_effective_model(p);
  const MomentState at = propagate_exact(m, vacuum_state(m.layout), analytic::first_minimum_time(p));
  const OptimalAngle best = optimal_angle(at, 0, 1);
  CHECK(best.variance == Approx(analytic::envelope_minimum(p)).margin(1e-12));
  CHECK(std::min(best.theta, kPi - best.theta) < 1e-6);
  double scan = 1.0;
  for (int k = 0; k < 3600; ++k) scan = std::min(scan, joint_quadrature_variance(at, 0, 1, k * kPi / 3600));
  CHECK(best.variance <= scan + 1e-15);
}

TEST_CASE("property: optimal angle bounds every sampled angle") {
  testing::Gen gen(51);
  for (int draw = 0; draw < 200; ++draw) {
    const MomentState s = gen.gaussian_state(gen.integer(2, 4), 0.6);
    const OptimalAngle o = optimal_angle(s, 0, 1);
    REQUIRE(o.theta >= 0.0);
    REQUIRE(o.theta < kPi);
    REQUIRE(joint_quadrature_variance(s, 0, 1, o.theta) == Approx(o.variance).margin(1e-12));
    for (int k = 0; k < 32; ++k) {
      const double th = gen.uniform(-10.0, 10.0);
      const double v = joint_quadrature_variance(s, 0, 1, th);
      REQUIRE(o.variance <= v + 1e-12);
      REQUIRE(joint_quadrature_variance(s, 0, 1, th + kPi) == Approx(v).margin(1e-12));
    }
    // V = lᵀσl with |l|² = ½
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.cov);
    REQUIRE(o.variance >= 0.5 * es.eigenvalues().minCoeff() - 1e-12);
    REQUIRE(o.variance > 0.0);
  }
}

TEST_CASE("property: local rotations of vacuum stay at the vacuum level") {
  testing::Gen gen(52);
  for (int draw = 0; draw < 200; ++draw) {
    MomentState s = vacuum_state(ModeLayout::full());
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t one[] = {k};
      s = rotate_modes(s, one, gen.uniform(-kPi, kPi));
    }
    REQUIRE(optimal_angle(s, gen.integer(0, 1), 2 + gen.integer(0, 1)).variance == Approx(0.25).margin(1e-14));
  }
}

TEST_CASE("property: squeezing below vacuum fails the separability threshold") {
  testing::Gen gen(53);
  const MomentState vac = vacuum_state(ModeLayout::spins());
  CHECK(epr_witness(vac, 0, 1, 0.4) == Approx(0.5).margin(1e-15));
  for (int draw = 0; draw < 200; ++draw) {
    const std::size_t both[] = {0, 1};
    const MomentState s = rotate_modes(squeezed_pair(gen.uniform(0.01, 2.0)), both, gen.uniform(0.0, kPi));
    const OptimalAngle o = optimal_angle(s, 0, 1);
    REQUIRE(o.variance < 0.25);
    const double w = epr_witness(s, 0, 1, o.theta);
    REQUIRE(w < 0.5);
    REQUIRE(w == Approx(2.0 * o.variance).margin(1e-12));
  }
}

TEST_CASE("mode excitation") {
  CHECK(mode_excitation(vacuum_state(ModeLayout::spins()), 0) == 0.0);
  CHECK(mode_excitation(squeezed_pair(1.117), 0) == Approx(std::pow(std::sinh(1.117), 2)).epsilon(1e-12));
  CHECK(mode_excitation(squeezed_pair(1.117), 1) == Approx(1.86).margin(5e-3));
  const SystemParams p = testing::reference_point();
  const LinearModel m = build_effective_model(p);
  const MomentState at = propagate_exact(m, vacuum_state(m.layout), analytic::first_minimum_time(p));
  CHECK(mode_excitation(at, 0) == Approx(1.0 / 3.0).epsilon(1e-12));
  MomentState shifted = vacuum_state(ModeLayout::spins());
  shifted.mean(0) = 2.0;
  CHECK(mode_excitation(shifted, 0) == Approx(2.0));
  CHECK_THROWS_AS(mode_excitation(shifted, 2), LayoutError);
}

TEST_CASE("trace construction") {
  const SqueezingTrace tr = effective_trace(testing::reference_point(), 1e-3, 201);
  REQUIRE(tr.size() == 201);
  REQUIRE(tr.occupations.size() == 2);
  for (std::size_t t = 0; t < tr.size(); ++t) {
    REQUIRE(tr.variance_opt[t] <= tr.variance_theta[t] + 1e-15);
    REQUIRE(tr.variance_opt[t] > 0.0);
    REQUIRE(tr.hp_valid[t]);
  }
  CHECK_FALSE(tr.first_violation.has_value());
  CHECK(tr.variance_theta.front() == Approx(0.25).margin(1e-15));
}

TEST_CASE("hp check") {
  const SystemParams p = testing::fast_hopping_point(-2.0);
  const LinearModel m = build_squeeze_model(p);
  TraceSettings ts;
  ts.mode_phase = kPi / 4.0;
  ts.theta = kPi / 2.0;
  SqueezingTrace tr = make_squeezing_trace(propagate_trace(m, vacuum_state(m.layout), 1e-3, 10001), m.layout, ts);
  REQUIRE(tr.first_violation.has_value());
  const double t_cross = std::asinh(std::sqrt(10.0)) / effective_params(p).b_coef;
  CHECK(t_cross == Approx(0.8364e-3).margin(1e-7));
  CHECK(*tr.first_violation == Approx(t_cross).margin(1e-7));
  for (std::size_t t = 0; t < tr.size(); ++t) REQUIRE(tr.hp_valid[t] == (tr.max_spin_excitation(t) <= 10.0));

  hp_check(tr, 1e12);
  CHECK_FALSE(tr.first_violation.has_value());
  CHECK(std::all_of(tr.hp_valid.begin(), tr.hp_valid.end(), [](bool b) { return b; }));
}

TEST_CASE("minimum search") {
  const SystemParams p = testing::reference_point();
  const LinearModel m = build_effective_model(p);
  const MomentState v0 = vacuum_state(m.layout);
  const SqueezingTrace tr = effective_trace(p, 1e-3, 1001);
  const Refinement r{&m, v0};
  const MinimumVariance best = find_min_variance(tr, &r);
  CHECK(best.time == Approx(analytic::first_minimum_time(p)).epsilon(1e-6));
  CHECK(best.variance == Approx(1.0 / 12.0).margin(1e-12));
  CHECK(std::min(best.theta, kPi - best.theta) < 1e-4);
  const MinimumVariance coarse = find_min_variance(tr);
  CHECK(coarse.time == Approx(analytic::first_minimum_time(p)).margin(1e-6));
  CHECK(coarse.variance >= best.variance);

  SystemParams off = p;
  off.g_collective = 0.0;
  const MinimumVariance flat = find_min_variance(effective_trace(off, 1e-3, 101));
  CHECK(flat.time == 0.0);
  CHECK(flat.variance == Approx(0.25).margin(1e-15));

  const SystemParams shifted = testing::reference_point(2.0, -0.77);
  const LinearModel ms = build_effective_model(shifted);
  const SqueezingTrace ts = effective_trace(shifted, 2e-3, 2001);
  const Refinement rs{&ms, vacuum_state(ms.layout)};
  CHECK(find_min_variance(ts, &rs).variance < 1.0 / 12.0);

  CHECK_THROWS_AS(find_min_variance(SqueezingTrace{}), EmptyTraceError);
  SqueezingTrace invalid = tr;
  std::fill(invalid.hp_valid.begin(), invalid.hp_valid.end(), false);
  CHECK_THROWS_AS(find_min_variance(invalid), HpInvalidError);
  CHECK(to_decibel(0.25) == 0.0);
  CHECK(to_decibel(0.025) == Approx(-10.0).epsilon(1e-12));
}
