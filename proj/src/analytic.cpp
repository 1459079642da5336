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

#include "nvsq/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "nvsq/errors.hpp"

namespace nvsq::analytic {

namespace {

using cd = std::complex<double>;

constexpr double kRegimeTolerance = 1e-9;

bool has_zeeman_offset(const EffectiveParams& e) {
  const double scale = std::max(std::abs(e.a_coef), std::abs(e.b_coef));
  return std::abs(e.delta) > kRegimeTolerance * scale;
}

/// λ as a strictly positive real, or DomainError.
double real_lambda(const EffectiveParams& e, const char* what) {
  if (has_zeeman_offset(e))
    throw DomainError(std::string(what) + " assumes equal Zeeman splitting (Delta = 0)");
  if (!e.lambda_is_real() || !(e.lambda.real() > 0.0)) {
    throw DomainError(std::string(what) +
                      " needs a real, non-zero lambda (|omega| > v with g > 0)");
  }
  return e.lambda.real();
}

}  // namespace

std::string_view to_string(OscillationConvention c) {
  return c == OscillationConvention::LambdaT ? "lambda_t" : "two_lambda_t";
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Oscillatory: return "oscillatory";
    case Regime::Exponential: return "exponential";
    case Regime::Boundary: return "boundary";
  }
  return "unknown";
}

double variance_equal_splitting(const SystemParams& p, double t, OscillationConvention conv) {
  const EffectiveParams e = effective_params(p);
  const double lambda = real_lambda(e, "variance_equal_splitting");
  const double arg = (conv == OscillationConvention::LambdaT ? 1.0 : 2.0) * lambda * t;
  const double s = std::sin(arg);
  return 0.25 * (1.0 - 2.0 * e.b_coef / (e.a_coef + e.b_coef) * s * s);
}

double envelope_minimum(const SystemParams& p) {
  const EffectiveParams e = effective_params(p);
  real_lambda(e, "envelope_minimum");
  return std::min(0.25, 0.25 * (e.a_coef - e.b_coef) / (e.a_coef + e.b_coef));
}

double excitation_equal_splitting(const SystemParams& p, double t) {
  const EffectiveParams e = effective_params(p);
  const double lambda = real_lambda(e, "excitation_equal_splitting");
  const double s = std::sin(lambda * t);
  return (e.b_coef / lambda) * (e.b_coef / lambda) * s * s;
}

Regime classify_regime(const EffectiveParams& e) {
  const double shifted = std::abs(e.delta + 2.0 * e.a_coef);
  const double pair = 2.0 * std::abs(e.b_coef);
  const double scale = std::max(shifted, pair);
  if (scale == 0.0 || std::abs(shifted - pair) <= kRegimeTolerance * scale) return Regime::Boundary;
  return shifted > pair ? Regime::Oscillatory : Regime::Exponential;
}

Regime classify_regime(const SystemParams& p) { return classify_regime(effective_params(p)); }

ExponentialCase exponential_case(const SystemParams& p, double t) {
  const double bt = std::abs(effective_params(p).b_coef) * t;
  const double s = std::sinh(bt);
  return {0.25 * std::exp(-2.0 * bt), 0.25 * std::exp(2.0 * bt), s * s};
}

NuCoefficients propagator_coefficients(const EffectiveParams& e, double t) {
  const double scale = std::max(std::abs(e.a_coef), std::abs(e.b_coef));
  if (std::abs(e.lambda) <= kRegimeTolerance * scale || scale == 0.0)
    throw DegenerateError("lambda = 0 (A = +-B): the nu coefficients are undefined");
  const cd lt = e.lambda * t;
  const cd i{0.0, 1.0};
  const cd sinc = std::sin(lt) / e.lambda;
  return {std::cos(lt) - i * e.a_coef * sinc, i * e.b_coef * sinc};
}

NuCoefficients propagator_coefficients(const SystemParams& p, double t) {
  return propagator_coefficients(effective_params(p), t);
}

SecondMoments second_moments(const NuCoefficients& nu) {
  return {-nu.nu1 * nu.nu2, std::norm(nu.nu1), -nu.nu2 * nu.nu2, nu.nu2 * std::conj(nu.nu1)};
}

double variance_from_moments(const SecondMoments& m) {
  return 0.25 * (m.c1c1dag + m.c1dagc1 + m.c1c2 + m.c1dagc2dag).real();
}

double first_minimum_time(const SystemParams& p, OscillationConvention conv) {
  const EffectiveParams e = effective_params(p);
  if (has_zeeman_offset(e)) throw RegimeError("first_minimum_time needs Delta = 0");
  if (classify_regime(e) != Regime::Oscillatory || !(e.lambda.real() > 0.0))
    throw RegimeError("first_minimum_time needs the oscillatory regime");
  const double lambda = e.lambda.real();
  return conv == OscillationConvention::LambdaT ? kPi / (2.0 * lambda) : kPi / (4.0 * lambda);
}

}  // namespace nvsq::analytic
