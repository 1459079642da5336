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
using namespace nvsq::analytic;
using Catch::Approx;

TEST_CASE("equal-splitting variance values") {
  const SystemParams p = testing::reference_point();
  CHECK(variance_equal_splitting(p, 0.0) == 0.25);
  const double lambda = effective_params(p).lambda.real();
  CHECK(variance_equal_splitting(p, kPi / (2.0 * lambda)) == Approx(1.0 / 12.0).margin(1e-15));
  CHECK(variance_equal_splitting(p, kPi / (4.0 * lambda), OscillationConvention::TwoLambdaT) ==
        Approx(1.0 / 12.0).margin(1e-15));
  CHECK(envelope_minimum(testing::reference_point(1.5)) == Approx(0.05).margin(1e-15));
  CHECK(envelope_minimum(testing::reference_point(2.0)) == Approx(1.0 / 12.0).margin(1e-15));
  CHECK(envelope_minimum(testing::reference_point(3.0)) == Approx(0.125).margin(1e-15));
  CHECK(envelope_minimum(testing::reference_point(1.5)) < envelope_minimum(testing::reference_point(2.0)));
  CHECK(to_string(OscillationConvention::LambdaT) == "lambda_t");
}

TEST_CASE("equal-splitting domain") {
  CHECK_THROWS_AS(variance_equal_splitting(testing::reference_point(0.5), 1e-4), DomainError);
  CHECK_THROWS_AS(variance_equal_splitting(testing::reference_point(2.0, -0.5), 1e-4), DomainError);
  CHECK_THROWS_AS(excitation_equal_splitting(testing::reference_point(0.5), 1e-4), DomainError);
  CHECK_THROWS_AS(variance_equal_splitting(testing::reference_point(1.0), 1e-4), ResonanceError);
}

TEST_CASE("property: closed form equals moment propagation") {
  testing::Gen gen(41);
  for (int draw = 0; draw < 20; ++draw) {
    SystemParams p = gen.equal_splitting_params();
    if (std::abs(p.detuning()) < p.v) continue;
    const LinearModel m = build_effective_model(p);
    const MomentState v0 = vacuum_state(m.layout);
    const double period = kPi / effective_params(p).lambda.real();
    for (int k = 0; k < 100; ++k) {
      const double t = gen.uniform(0.0, 3.0 * period);
      const MomentState s = propagate_exact(m, v0, t);
      REQUIRE(joint_quadrature_variance(s, 0, 1, 0.0) == Approx(variance_equal_splitting(p, t)).margin(1e-9));
      REQUIRE(mode_excitation(s, 0) == Approx(excitation_equal_splitting(p, t)).margin(1e-9));
      const double v = variance_equal_splitting(p, t);
      // negative detuning swaps which side of the vacuum level X(0) sits on
      const EffectiveParams e = effective_params(p);
      const double turning = 0.25 * (e.a_coef - e.b_coef) / (e.a_coef + e.b_coef);
      REQUIRE(v >= envelope_minimum(p) - 1e-15);
      REQUIRE(v >= std::min(turning, 0.25) - 1e-15);
      REQUIRE(v <= std::max(turning, 0.25) + 1e-15);
    }
  }
}

TEST_CASE("excitation peaks") {
  const SystemParams two = testing::reference_point(2.0);
  const SystemParams onehalf = testing::reference_point(1.5);
  auto peak = [](const SystemParams& p) {
    return excitation_equal_splitting(p, kPi / (2.0 * effective_params(p).lambda.real()));
  };
  CHECK(peak(two) == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(peak(onehalf) == Approx(0.8).epsilon(1e-12));
  CHECK(excitation_equal_splitting(two, 0.0) == 0.0);
}

TEST_CASE("regime classification") {
  CHECK(classify_regime(testing::reference_point()) == Regime::Oscillatory);
  CHECK(classify_regime(testing::reference_point(2.0, -2.0)) == Regime::Exponential);
  const EffectiveParams e = effective_params(testing::reference_point());
  CHECK(classify_regime(make_effective(e.a_coef, e.b_coef, -2.0 * e.a_coef + 2.0 * e.b_coef)) == Regime::Boundary);
  CHECK(classify_regime(make_effective(e.a_coef, e.b_coef, -2.0 * e.a_coef - 2.0 * e.b_coef)) == Regime::Boundary);
  CHECK(to_string(Regime::Exponential) == "exponential");
  CHECK_THROWS_AS(classify_regime(testing::reference_point(1.0)), ResonanceError);
}

TEST_CASE("regime classifier equals the drift eigenvalue test") {
  int compared = 0, agreed = 0;
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < 50; ++j) {
      const double a = 1.0;
      const double delta = -4.0 + 6.0 * i / 49.0;
      const double b = 1.5 * j / 49.0;
      const EffectiveParams e = make_effective(a, b, delta);
      const double gap = std::abs(std::abs(delta + 2.0 * a) - 2.0 * b);
      if (gap <= 1e-9 * std::max({std::abs(delta + 2.0 * a), 2.0 * b, 1.0})) continue;
      const Eigen::VectorXcd ev = build_effective_model(e).drift.eigenvalues();
      const double growth = ev.real().maxCoeff();
      const double scale = ev.cwiseAbs().maxCoeff();
      const bool unstable = growth > 1e-7 * scale;
      ++compared;
      agreed += (classify_regime(e) == Regime::Exponential) == unstable ? 1 : 0;
    }
  }
  CHECK(compared > 2400);
  CHECK(agreed == compared);
}

TEST_CASE("exponential case") {
  const SystemParams p = testing::fast_hopping_point(-2.0);
  CHECK(to_hz(effective_params(p).b_coef) == Approx(355.56).margin(0.01));
  const ExponentialCase zero = exponential_case(p, 0.0);
  CHECK(zero.v_min == 0.25);
  CHECK(zero.v_max == 0.25);
  CHECK(zero.excitation == 0.0);
  const ExponentialCase half = exponential_case(p, 0.5e-3);
  CHECK(half.v_min == Approx(0.0268).margin(5e-5));
  CHECK(half.excitation == Approx(1.86).margin(5e-3));
  const ExponentialCase one = exponential_case(p, 1e-3);
  CHECK(one.excitation == Approx(21.3).margin(0.05));
  testing::Gen gen(42);
  for (int k = 0; k < 200; ++k) {
    const ExponentialCase c = exponential_case(p, gen.uniform(0.0, 1e-3));
    REQUIRE(c.v_min * c.v_max == Approx(1.0 / 16.0).epsilon(1e-14));
  }
}

TEST_CASE("exponential case equals the squeeze-model propagation") {
  const SystemParams p = testing::fast_hopping_point(-2.0);
  const LinearModel m = build_squeeze_model(p);
  const std::size_t both[] = {0, 1};
  for (double t : {1e-4, 3e-4, 5e-4, 8e-4}) {
    const MomentState s = rotate_modes(propagate_exact(m, vacuum_state(m.layout), t), both, kPi / 4.0);
    const ExponentialCase c = exponential_case(p, t);
    CHECK(joint_quadrature_variance(s, 0, 1, kPi / 2.0) == Approx(c.v_min).margin(1e-12));
    CHECK(joint_quadrature_variance(s, 0, 1, 0.0) == Approx(c.v_max).epsilon(1e-12));
    CHECK(mode_excitation(s, 0) == Approx(c.excitation).epsilon(1e-12));
  }
}

TEST_CASE("propagator coefficients") {
  const SystemParams p = testing::reference_point();
  const NuCoefficients zero = propagator_coefficients(p, 0.0);
  CHECK(zero.nu1 == std::complex<double>(1.0, 0.0));
  CHECK(zero.nu2 == std::complex<double>(0.0, 0.0));
  testing::Gen gen(43);
  for (int draw = 0; draw < 200; ++draw) {
    const SystemParams q = gen.equal_splitting_params();
    if (std::abs(q.detuning()) < q.v) continue;
    const double t = gen.uniform(0.0, 1e-3);
    const NuCoefficients nu = propagator_coefficients(q, t);
    const std::complex<double> id = std::norm(nu.nu1) + nu.nu2 * nu.nu2;
    REQUIRE(id.real() == Approx(1.0).margin(1e-12));
    REQUIRE(std::abs(id.imag()) < 1e-12);
    REQUIRE(variance_from_moments(second_moments(nu)) == Approx(variance_equal_splitting(q, t)).margin(1e-12));
  }
  CHECK_THROWS_AS(propagator_coefficients(make_effective(1.0, 1.0, 0.0), 1.0), DegenerateError);
  const NuCoefficients complex_lambda = propagator_coefficients(make_effective(1.0, 2.0, 0.0), 0.3);
  CHECK(std::isfinite(std::abs(complex_lambda.nu1)));
}

TEST_CASE("first minimum time") {
  const SystemParams p = testing::reference_point();
  const double t = first_minimum_time(p);
  CHECK(t == Approx(2.706e-4).margin(1e-7));
  CHECK(t < 0.5e-3);
  CHECK(first_minimum_time(p, OscillationConvention::TwoLambdaT) == Approx(0.5 * t).epsilon(1e-14));
  const SystemParams three = testing::reference_point(3.0);
  CHECK(first_minimum_time(three) == Approx(kPi / (2.0 * effective_params(three).lambda.real())).epsilon(1e-14));
  SystemParams strong = p;
  strong.g_collective *= 2.0;
  CHECK(first_minimum_time(strong) == Approx(0.25 * t).epsilon(1e-12));
  CHECK_THROWS_AS(first_minimum_time(testing::reference_point(2.0, -0.5)), RegimeError);
  CHECK_THROWS_AS(first_minimum_time(testing::reference_point(0.5)), RegimeError);
}
