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

#ifndef CWSC_DEFINETTI_HPP_
#define CWSC_DEFINETTI_HPP_

#include <functional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cwsc/rng.hpp"
#include "cwsc/scalar_math.hpp"

namespace cwsc {

// Parameters of the leading-order peak approximation
// I(x) ~ (Q/kappa) * Gamma(lambda/kappa) * (2/(x*P))^(lambda/kappa) * e^{-x F(a)/2}.
// `value` carries the evaluated approximant in the shifted representation
// (the e^{-x F(m)/2} factor is absorbed by the log-domain shift).
struct LaplaceApprox {
  double kappa = 0.0;
  double p = 0.0;
  double lambda = 0.0;
  double q = 0.0;
  double value = 0.0;
};

// The mixing measure nu_N with density proportional to
// exp(-N^alpha F_beta(t)/2) / (1 - t^2) on (-1,1), normalized by adaptive
// quadrature. All internal densities carry the stabilizing factor
// exp(+N^alpha F_beta(m)/2); probabilities and ratios are shift-invariant.
//
// Immutable after construction and shareable across threads. Sampling takes
// a caller-owned RngStream.
class DeFinettiMeasure {
 public:
  // Normalizes the measure for the given parameters (requires beta > 1).
  explicit DeFinettiMeasure(const ModelParams& params);

  const ModelParams& params() const { return params_; }
  const Magnetization& magnetization() const { return mag_; }
  double m() const { return mag_.m; }

  // Shifted normalization constant: Z_N * exp(+N^alpha F_beta(m)/2).
  double z_shifted() const { return z_shifted_; }
  // The subtracted exponent: N^alpha * F_beta(m) / 2 (so that the true
  // Z_N equals z_shifted() * exp(shift())).
  double shift() const { return shift_; }
  // Peak width scale sigma* = (N^alpha F''_beta(m) / 4)^(-1/2).
  double peak_width() const { return sigma_; }

  // Shifted unnormalized log density:
  // -N^alpha (F_beta(t) - F_beta(m))/2 - ln(1-t^2).
  double log_density_shifted(double t) const;
  // Normalized probability density of nu_N at t.
  double density(double t) const;

  // nu_N([lo, hi]) by adaptive quadrature.
  double interval_mass(double lo, double hi) const;
  // Integral of f against nu_N over [lo, hi] (defaults to the full domain).
  double expect(const std::function<double(double)>& f) const;
  double expect_on(const std::function<double(double)>& f, double lo,
                   double hi) const;

  // nu_N([-m/2, m/2]); exponentially small in N^alpha.
  double central_mass() const;
  // int_{m/2}^{1} |t - m|^ell dnu_N, ell >= 1.
  double abs_moment_right(int ell) const;
  // int_{m/2}^{1} (1 + m^2 - 2 m t)^ell dnu_N, ell >= 1.
  double mixed_moment_right(int ell) const;

  // Inverse-CDF draw from nu_N; deterministic given the stream state.
  double sample_t(RngStream& rng) const;

  // Inverse-CDF lookup table: cdf() is strictly increasing from 0 to 1 on
  // the nodes grid().
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& cdf() const { return cdf_; }

  nlohmann::json to_json() const;
  static DeFinettiMeasure from_json(const nlohmann::json& j);

 private:
  DeFinettiMeasure() = default;
  void init_scalars(const ModelParams& params);
  std::vector<double> full_anchors() const;
  void build_cdf_table();

  ModelParams params_;
  Magnetization mag_;
  double f_m_ = 0.0;       // F_beta(m)
  double x_ = 0.0;         // N^alpha
  double shift_ = 0.0;     // x * F_beta(m) / 2
  double sigma_ = 0.0;     // peak width
  double z_shifted_ = 0.0;
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

/// Shifted unnormalized log density of nu_N (solves the magnetization
/// internally; prefer DeFinettiMeasure::log_density_shifted in hot loops).
double unnormalized_log_density(double t, const ModelParams& params);

/// Leading-order approximation of the (shifted) normalization constant:
/// kappa=2, P=F''_beta(m)/2, lambda=1, Q=1/(1-m^2), summed over the four
/// monotonicity regions of F_beta.
LaplaceApprox laplace_z_approx(const ModelParams& params);

/// Gamma(k/2) for small positive integer k, via Gamma(1/2) = sqrt(pi),
/// Gamma(1) = 1 and the recurrence Gamma(x+1) = x Gamma(x).
double gamma_half_integer(int k);

/// E[t^degree] under the mixing density exp(-x F_beta(t)/2)/(1-t^2), for any
/// beta > 0 and exponent scale x >= 1. This is the t-side of the de Finetti
/// identity for an M-spin system (x = M) and also covers beta <= 1, where
/// DeFinettiMeasure itself does not apply.
double mixing_expectation_poly(double beta, double x, int degree);

}  // namespace cwsc

#endif  // CWSC_DEFINETTI_HPP_
