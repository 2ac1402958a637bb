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

#include "cwsc/scalar_math.hpp"

#include <cmath>
#include <string>

#include "cwsc/errors.hpp"

namespace cwsc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_open_unit(double t, const char* where) {
  if (!(std::abs(t) < 1.0)) {
    throw DomainError(std::string(where) + ": |t| must be < 1, got t=" +
                      std::to_string(t));
  }
}

void require_positive_beta(double beta, const char* where) {
  if (!(beta > 0.0)) {
    throw DomainError(std::string(where) + ": beta must be > 0, got beta=" +
                      std::to_string(beta));
  }
}

}  // namespace

ModelParams::ModelParams(double beta_, double alpha_, std::int64_t n_)
    : beta(beta_), alpha(alpha_), n(n_) {
  if (!(beta > 0.0)) throw ParameterError("ModelParams: beta must be > 0");
  if (!(alpha > 0.0)) throw ParameterError("ModelParams: alpha must be > 0");
  if (n < 1) throw ParameterError("ModelParams: n must be >= 1");
}

double ModelParams::exponent_scale() const {
  return std::pow(static_cast<double>(n), alpha);
}

double f_beta(double t, double beta) {
  require_open_unit(t, "f_beta");
  require_positive_beta(beta, "f_beta");
  const double a = std::atanh(t);
  // ln(1-t^2) split as log1p(-t) + log1p(t) to stay accurate near |t| -> 1.
  return a * a / beta + std::log1p(-t) + std::log1p(t);
}

double f_beta_d1(double t, double beta) {
  require_open_unit(t, "f_beta_d1");
  require_positive_beta(beta, "f_beta_d1");
  return 2.0 * (std::atanh(t) - beta * t) / (beta * (1.0 - t * t));
}

double f_beta_d2(double t, double beta) {
  require_open_unit(t, "f_beta_d2");
  require_positive_beta(beta, "f_beta_d2");
  const double one_m_t2 = (1.0 - t) * (1.0 + t);
  return 2.0 * (1.0 - beta - beta * t * t + 2.0 * t * std::atanh(t)) /
         (beta * one_m_t2 * one_m_t2);
}

Magnetization solve_magnetization(double beta) {
  if (!(beta > 1.0)) {
    throw ParameterError(
        "solve_magnetization: no positive root of tanh(beta*m) = m for "
        "beta <= 1, got beta=" +
        std::to_string(beta));
  }
  const auto g = [beta](double m) { return std::tanh(beta * m) - m; };
  // g > 0 just right of 0 (slope beta-1 > 0) and g(1-) < 0, so the root is
  // bracketed; bisect until the bracket is tiny, then polish with Newton.
  double lo = 1e-13;
  double hi = 1.0 - 1e-13;
  if (!(g(hi) < 0.0)) {
    // 1 - m ~ 2 e^{-2 beta} falls below double resolution near beta ~ 14
    throw NumericError(
        "solve_magnetization: root indistinguishable from 1 at beta=" +
        std::to_string(beta));
  }
  for (int i = 0; i < 90; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double m = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) {
    const double c = std::cosh(beta * m);
    const double gp = beta / (c * c) - 1.0;  // d/dm [tanh(beta m) - m]
    if (gp == 0.0) break;
    const double step = g(m) / gp;
    const double next = m - step;
    if (next <= 0.0 || next >= 1.0) break;
    m = next;
  }
  const double residual = std::abs(g(m));
  if (!(m > 0.0 && m < 1.0) || residual > 1e-12) {
    throw NumericError("solve_magnetization: residual " +
                       std::to_string(residual) + " exceeds 1e-12 at beta=" +
                       std::to_string(beta));
  }
  return Magnetization{m, residual};
}

double envelope_bound(double t, double beta) {
  require_open_unit(t, "envelope_bound");
  require_positive_beta(beta, "envelope_bound");
  return std::exp(4.5 * beta) * (1.0 - std::abs(t));
}

double tilt_parameter(double t) {
  require_open_unit(t, "tilt_parameter");
  return -std::atanh(t);
}

double ld_rate(double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw DomainError("ld_rate: a must be in (0,1), got a=" +
                      std::to_string(a));
  }
  return -0.25 * std::log1p(-a * a);
}

double semicircle_density(double x) {
  if (std::abs(x) >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * kPi);
}

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * kPi) +
         std::asin(0.5 * x) / kPi;
}

std::int64_t catalan_number(int k) {
  if (k < 0 || k > 30) {
    throw DomainError("catalan_number: k must be in [0,30], got k=" +
                      std::to_string(k));
  }
  std::int64_t c = 1;
  for (int j = 0; j < k; ++j) {
    c = c * 2 * (2 * j + 1) / (j + 2);  // division is exact
  }
  return c;
}

double semicircle_moment(int k) {
  if (k < 0 || k > 30) {
    throw DomainError("semicircle_moment: k must be in [0,30], got k=" +
                      std::to_string(k));
  }
  if (k % 2 == 1) return 0.0;
  return static_cast<double>(catalan_number(k / 2));
}

double least_squares_slope(const double* xs, const double* ys, int count) {
  if (count < 2) throw ContractError("least_squares_slope: need >= 2 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < count; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = count * sxx - sx * sx;
  if (denom == 0.0) throw ContractError("least_squares_slope: degenerate xs");
  return (count * sxy - sx * sy) / denom;
}

}  // namespace cwsc
