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

#include "cwsc/definetti.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "cwsc/errors.hpp"
#include "cwsc/quadrature.hpp"

namespace cwsc {

namespace {

constexpr double kEdgeEps = 1e-12;   // domain clipped to [-1+eps, 1-eps]
constexpr double kSqrtPi = 1.7724538509055160273;

double exp_or_zero(double log_value) {
  return log_value < -745.0 ? 0.0 : std::exp(log_value);
}

void append_peak_points(std::vector<double>* anchors, double center,
                        double sigma) {
  for (double k : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    anchors->push_back(center - k * sigma);
    anchors->push_back(center + k * sigma);
  }
}

}  // namespace

void DeFinettiMeasure::init_scalars(const ModelParams& params) {
  if (!(params.beta > 1.0)) {
    throw ParameterError(
        "DeFinettiMeasure: beta > 1 required (measure concentrates at +-m), "
        "got beta=" +
        std::to_string(params.beta));
  }
  params_ = params;
  mag_ = solve_magnetization(params.beta);
  f_m_ = f_beta(mag_.m, params.beta);
  x_ = params.exponent_scale();
  shift_ = 0.5 * x_ * f_m_;
  sigma_ = 1.0 / std::sqrt(0.25 * x_ * f_beta_d2(mag_.m, params.beta));
}

DeFinettiMeasure::DeFinettiMeasure(const ModelParams& params) {
  init_scalars(params);
  const auto density = [this](double t) { return exp_or_zero(log_density_shifted(t)); };
  const QuadratureResult z = integrate_adaptive(
      density, -1.0 + kEdgeEps, 1.0 - kEdgeEps, full_anchors(),
      QuadratureOptions{1e-12, 1e-10, 4000});
  z_shifted_ = z.value;
  if (!(z_shifted_ > 0.0) || !std::isfinite(z_shifted_)) {
    throw NumericError("DeFinettiMeasure: normalization constant is not a "
                       "positive finite number");
  }
  build_cdf_table();
}

double DeFinettiMeasure::log_density_shifted(double t) const {
  if (!(std::abs(t) < 1.0)) {
    throw DomainError("log_density_shifted: |t| must be < 1");
  }
  return -0.5 * x_ * (f_beta(t, params_.beta) - f_m_) - std::log1p(-t) -
         std::log1p(t);
}

double DeFinettiMeasure::density(double t) const {
  return exp_or_zero(log_density_shifted(t)) / z_shifted_;
}

std::vector<double> DeFinettiMeasure::full_anchors() const {
  std::vector<double> anchors = {-mag_.m, -0.5 * mag_.m, 0.0,
                                 0.5 * mag_.m, mag_.m};
  append_peak_points(&anchors, -mag_.m, sigma_);
  append_peak_points(&anchors, mag_.m, sigma_);
  return anchors;
}

double DeFinettiMeasure::interval_mass(double lo, double hi) const {
  lo = std::max(lo, -1.0 + kEdgeEps);
  hi = std::min(hi, 1.0 - kEdgeEps);
  if (!(lo < hi)) return 0.0;
  const auto density = [this](double t) { return exp_or_zero(log_density_shifted(t)); };
  // The absolute floor keeps exponentially small masses (central interval at
  // large N^alpha) from demanding impossible relative accuracy.
  QuadratureOptions opts{1e-18 * z_shifted_, 1e-10, 4000};
  const QuadratureResult r =
      integrate_adaptive(density, lo, hi, full_anchors(), opts);
  return r.value / z_shifted_;
}

double DeFinettiMeasure::expect_on(const std::function<double(double)>& f,
                                   double lo, double hi) const {
  lo = std::max(lo, -1.0 + kEdgeEps);
  hi = std::min(hi, 1.0 - kEdgeEps);
  if (!(lo < hi)) return 0.0;
  const auto integrand = [this, &f](double t) {
    const double w = exp_or_zero(log_density_shifted(t));
    return w == 0.0 ? 0.0 : f(t) * w;
  };
  // Looser absolute floor than interval_mass: a signed f can cancel to a
  // total near zero, where a purely relative target is unreachable.
  QuadratureOptions opts{1e-13 * z_shifted_, 1e-10, 4000};
  const QuadratureResult r =
      integrate_adaptive(integrand, lo, hi, full_anchors(), opts);
  return r.value / z_shifted_;
}

double DeFinettiMeasure::expect(const std::function<double(double)>& f) const {
  return expect_on(f, -1.0, 1.0);
}

double DeFinettiMeasure::central_mass() const {
  return interval_mass(-0.5 * mag_.m, 0.5 * mag_.m);
}

double DeFinettiMeasure::abs_moment_right(int ell) const {
  if (ell < 1) throw DomainError("abs_moment_right: ell must be >= 1");
  const double m = mag_.m;
  return expect_on([m, ell](double t) { return std::pow(std::abs(t - m), ell); },
                   0.5 * m, 1.0);
}

double DeFinettiMeasure::mixed_moment_right(int ell) const {
  if (ell < 1) throw DomainError("mixed_moment_right: ell must be >= 1");
  const double m = mag_.m;
  return expect_on(
      [m, ell](double t) { return std::pow(1.0 + m * m - 2.0 * m * t, ell); },
      0.5 * m, 1.0);
}

void DeFinettiMeasure::build_cdf_table() {
  const double lo = -1.0 + kEdgeEps;
  const double hi = 1.0 - kEdgeEps;

  // Boundary set: coarse global grid plus two refinement windows per peak.
  // Mass concentrates at scale sigma*, so the table keeps >= 64 nodes per
  // sigma*-interval around +-m.
  std::vector<double> bounds;
  const double coarse = 1.0 / 64.0;
  for (double t = lo; t < hi; t += coarse) bounds.push_back(t);
  bounds.push_back(hi);
  for (double center : {-mag_.m, mag_.m}) {
    const double fine = sigma_ / 64.0;
    const double mid = sigma_ / 8.0;
    for (double t = center - 4.0 * sigma_; t <= center + 4.0 * sigma_;
         t += fine) {
      if (t > lo && t < hi) bounds.push_back(t);
    }
    for (double t = center - 16.0 * sigma_; t <= center + 16.0 * sigma_;
         t += mid) {
      if (t > lo && t < hi) bounds.push_back(t);
    }
  }
  for (double t : full_anchors()) {
    if (t > lo && t < hi) bounds.push_back(t);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double a, double b) { return b - a < 1e-15; }),
               bounds.end());
  if (bounds.back() < hi) bounds.push_back(hi);

  const auto density = [this](double t) { return exp_or_zero(log_density_shifted(t)); };

  // One Kronrod panel per cell; verify against the adaptive normalization
  // and refine globally if the two routes disagree.
  for (int attempt = 0;; ++attempt) {
    std::vector<double> mass(bounds.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
      mass[i] = gauss_kronrod_15(density, bounds[i], bounds[i + 1], nullptr);
      if (mass[i] < 0.0) mass[i] = 0.0;
      total += mass[i];
    }
    if (std::abs(total / z_shifted_ - 1.0) <= 1e-9) {
      grid_.clear();
      cdf_.clear();
      grid_.push_back(bounds.front());
      cdf_.push_back(0.0);
      double cum = 0.0;
      for (std::size_t i = 0; i < mass.size(); ++i) {
        cum += mass[i];
        const double value = std::min(cum / total, 1.0);
        if (value > cdf_.back()) {
          grid_.push_back(bounds[i + 1]);
          cdf_.push_back(value);
        }
      }
      cdf_.back() = 1.0;
      if (cdf_.size() < 2) {
        throw NumericError("DeFinettiMeasure: degenerate CDF table");
      }
      return;
    }
    if (attempt >= 4) {
      throw NumericError(
          "DeFinettiMeasure: CDF table mass disagrees with adaptive "
          "normalization (re-integration gives " +
          std::to_string(total / z_shifted_) + ")");
    }
    std::vector<double> refined;
    refined.reserve(bounds.size() * 2);
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
      refined.push_back(bounds[i]);
      refined.push_back(0.5 * (bounds[i] + bounds[i + 1]));
    }
    refined.push_back(bounds.back());
    bounds.swap(refined);
  }
}

double DeFinettiMeasure::sample_t(RngStream& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  std::size_t k = static_cast<std::size_t>(it - cdf_.begin());
  if (k == 0) k = 1;
  if (k >= cdf_.size()) k = cdf_.size() - 1;
  const double c0 = cdf_[k - 1];
  const double c1 = cdf_[k];
  const double w = (u - c0) / (c1 - c0);
  return grid_[k - 1] + w * (grid_[k] - grid_[k - 1]);
}

nlohmann::json DeFinettiMeasure::to_json() const {
  nlohmann::json j;
  j["beta"] = params_.beta;
  j["alpha"] = params_.alpha;
  j["n"] = params_.n;
  j["m"] = mag_.m;
  j["m_residual"] = mag_.residual;
  j["z_shifted"] = z_shifted_;
  j["shift"] = shift_;
  j["sigma"] = sigma_;
  j["grid"] = grid_;
  j["cdf"] = cdf_;
  return j;
}

DeFinettiMeasure DeFinettiMeasure::from_json(const nlohmann::json& j) {
  DeFinettiMeasure measure;
  measure.init_scalars(ModelParams(j.at("beta").get<double>(),
                                   j.at("alpha").get<double>(),
                                   j.at("n").get<std::int64_t>()));
  if (std::abs(j.at("m").get<double>() - measure.mag_.m) > 1e-12) {
    throw ContractError("DeFinettiMeasure::from_json: stored m disagrees "
                        "with the magnetization equation");
  }
  measure.z_shifted_ = j.at("z_shifted").get<double>();
  measure.grid_ = j.at("grid").get<std::vector<double>>();
  measure.cdf_ = j.at("cdf").get<std::vector<double>>();
  if (measure.grid_.size() != measure.cdf_.size() || measure.grid_.size() < 2) {
    throw ContractError("DeFinettiMeasure::from_json: grid/cdf size mismatch");
  }
  for (std::size_t i = 1; i < measure.cdf_.size(); ++i) {
    if (!(measure.cdf_[i] > measure.cdf_[i - 1]) ||
        !(measure.grid_[i] > measure.grid_[i - 1])) {
      throw ContractError("DeFinettiMeasure::from_json: table not strictly "
                          "increasing");
    }
  }
  if (measure.cdf_.front() != 0.0 || measure.cdf_.back() != 1.0) {
    throw ContractError("DeFinettiMeasure::from_json: cdf must run 0 to 1");
  }
  return measure;
}

double unnormalized_log_density(double t, const ModelParams& params) {
  if (!(params.beta > 1.0)) {
    throw ParameterError("unnormalized_log_density: beta > 1 required");
  }
  const Magnetization mag = solve_magnetization(params.beta);
  const double x = params.exponent_scale();
  return -0.5 * x * (f_beta(t, params.beta) - f_beta(mag.m, params.beta)) -
         std::log1p(-t) - std::log1p(t);
}

LaplaceApprox laplace_z_approx(const ModelParams& params) {
  if (!(params.beta > 1.0)) {
    throw ParameterError("laplace_z_approx: beta > 1 required");
  }
  const Magnetization mag = solve_magnetization(params.beta);
  const double x = params.exponent_scale();
  const double f2 = f_beta_d2(mag.m, params.beta);
  LaplaceApprox approx;
  approx.kappa = 2.0;
  approx.p = 0.5 * f2;
  approx.lambda = 1.0;
  approx.q = 1.0 / (1.0 - mag.m * mag.m);
  // Four monotone regions, two per peak; each contributes
  // (Q/kappa) Gamma(1/2) (2/(x P))^(1/2) in the shifted representation.
  approx.value = 4.0 * (approx.q / approx.kappa) * kSqrtPi *
                 std::sqrt(2.0 / (x * approx.p));
  return approx;
}

double gamma_half_integer(int k) {
  if (k < 1 || k > 64) {
    throw DomainError("gamma_half_integer: k must be in [1,64]");
  }
  double value = (k % 2 == 1) ? kSqrtPi : 1.0;  // Gamma(1/2) or Gamma(1)
  for (int j = k % 2 == 1 ? 1 : 2; j < k; j += 2) {
    value *= 0.5 * j;  // Gamma(x+1) = x Gamma(x) with x = j/2
  }
  return value;
}

double mixing_expectation_poly(double beta, double x, int degree) {
  if (!(beta > 0.0)) throw DomainError("mixing_expectation_poly: beta > 0");
  if (!(x >= 1.0)) throw DomainError("mixing_expectation_poly: x >= 1");
  if (degree < 0) throw DomainError("mixing_expectation_poly: degree >= 0");

  double f_min = 0.0;  // F_beta(0) = 0 is the minimum for beta <= 1
  std::vector<double> anchors = {-0.5, 0.0, 0.5};
  if (beta > 1.0) {
    const Magnetization mag = solve_magnetization(beta);
    f_min = f_beta(mag.m, beta);
    const double sigma =
        1.0 / std::sqrt(0.25 * x * f_beta_d2(mag.m, beta));
    anchors = {-mag.m, -0.5 * mag.m, 0.0, 0.5 * mag.m, mag.m};
    append_peak_points(&anchors, -mag.m, sigma);
    append_peak_points(&anchors, mag.m, sigma);
  }
  const auto weight = [beta, x, f_min](double t) {
    return exp_or_zero(-0.5 * x * (f_beta(t, beta) - f_min) - std::log1p(-t) -
                       std::log1p(t));
  };
  const QuadratureOptions opts{1e-14, 1e-11, 4000};
  const double den =
      integrate_adaptive(weight, -1.0 + kEdgeEps, 1.0 - kEdgeEps, anchors, opts)
          .value;
  if (degree == 0) return 1.0;
  const auto num_f = [&weight, degree](double t) {
    return std::pow(t, degree) * weight(t);
  };
  QuadratureOptions num_opts = opts;
  num_opts.abs_tol = 1e-14 * std::max(den, 1.0);
  const double num = integrate_adaptive(num_f, -1.0 + kEdgeEps, 1.0 - kEdgeEps,
                                        anchors, num_opts)
                         .value;
  return num / den;
}

}  // namespace cwsc
