// Copyright 2026 the cwsc authors.
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

#ifndef CWSC_SCALAR_MATH_HPP_
#define CWSC_SCALAR_MATH_HPP_

#include <cstdint>

namespace cwsc {

// Model parameters of a generalized Curie-Weiss matrix ensemble: inverse
// temperature beta, size exponent alpha, matrix dimension n.
struct ModelParams {
  double beta = 0.0;
  double alpha = 0.0;
  std::int64_t n = 0;

  ModelParams() = default;
  ModelParams(double beta_, double alpha_, std::int64_t n_);

  // N^alpha, the exponent scale in front of the rate function.
  double exponent_scale() const;
};

// Positive root of tanh(beta*m) = m together with the fixed-point residual
// |tanh(beta*m) - m| achieved by the solver.
struct Magnetization {
  double m = 0.0;
  double residual = 0.0;
};

/// Rate function F_beta(t) = artanh(t)^2/beta + ln(1-t^2) on (-1,1).
/// Even in t, F_beta(0) = 0, minima at +-m for beta > 1.
double f_beta(double t, double beta);

/// First derivative F'_beta(t) = 2*(artanh(t) - beta*t) / (beta*(1-t^2)).
double f_beta_d1(double t, double beta);

/// Second derivative, in closed form:
/// F''_beta(t) = 2*(1 - beta - beta*t^2 + 2*t*artanh(t)) / (beta*(1-t^2)^2).
double f_beta_d2(double t, double beta);

/// Solve tanh(beta*m) = m on (0,1) for beta > 1. Bisection bracket on
/// [1e-8, 1-1e-8] followed by a Newton polish; residual <= 1e-12.
Magnetization solve_magnetization(double beta);

/// Endpoint envelope e^{9*beta/2} * (1 - |t|), which dominates
/// exp(-F_beta(t)/2) on (-1,1) and certifies integrability near +-1.
double envelope_bound(double t, double beta);

/// Exponential tilt lambda(t) = 0.5*ln((1-t)/(1+t)) = -artanh(t).
double tilt_parameter(double t);

/// Large-deviation rate q_a = -ln(1-a^2)/4 > 0 for a in (0,1).
double ld_rate(double a);

// Semicircle reference measure on [-2,2]: density sqrt(4-x^2)/(2*pi),
// even moments are the Catalan numbers.
double semicircle_density(double x);
double semicircle_cdf(double x);
double semicircle_moment(int k);

/// Catalan number C_k by the exact integer recurrence
/// C_{k+1} = C_k * 2*(2k+1)/(k+2), valid for k <= 30 in 64-bit arithmetic.
std::int64_t catalan_number(int k);

/// Least-squares slope of y against x.
double least_squares_slope(const double* xs, const double* ys, int count);

}  // namespace cwsc

#endif  // CWSC_SCALAR_MATH_HPP_
