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
#include <random>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "cwsc/errors.hpp"
#include "oracles.hpp"

using namespace cwsc;

namespace {

// Frozen fixtures from a 40-digit quadrature run of the same integrals
// (beta = 2 throughout).
constexpr double kZShift8 = 0.975231891871;    // alpha=2, N=8
constexpr double kZShift32 = 0.242727576075;   // alpha=2, N=32
constexpr double kRatio8 = 1.00472932503;
constexpr double kRatio16 = 1.00112169515;
constexpr double kRatio32 = 1.0002770242;
constexpr double kCentral20 = 1.423226105e-3;  // alpha=1
constexpr double kCentral40 = 5.7433289e-6;
constexpr double kCentral80 = 9.669752457e-11;
constexpr double kMixed32_1 = 0.04180831119;   // alpha=2, N=32
constexpr double kMixed32_2 = 0.003526112124;
constexpr double kMixed32_3 = 0.0002999694253;

double lookup_cdf(const DeFinettiMeasure& measure, double t) {
  const auto& grid = measure.grid();
  const auto& cdf = measure.cdf();
  if (t <= grid.front()) return 0.0;
  if (t >= grid.back()) return 1.0;
  const auto it = std::upper_bound(grid.begin(), grid.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - grid.begin());
  const double w = (t - grid[k - 1]) / (grid[k] - grid[k - 1]);
  return cdf[k - 1] + w * (cdf[k] - cdf[k - 1]);
}

}  // namespace

TEST_CASE("construction requires beta > 1") {
  CHECK_THROWS_AS(DeFinettiMeasure(ModelParams(1.0, 2.0, 8)), ParameterError);
  CHECK_THROWS_AS(DeFinettiMeasure(ModelParams(0.5, 2.0, 8)), ParameterError);
}

TEST_CASE("shifted log density: shift anchor and symmetry") {
  const ModelParams params(2.0, 2.0, 10);
  const DeFinettiMeasure measure(params);
  const double m = measure.m();

  // at t = m the exponent vanishes by the shift, leaving -ln(1-m^2)
  CHECK(measure.log_density_shifted(m) ==
        doctest::Approx(-std::log1p(-m) - std::log1p(m)).epsilon(1e-14));
  // at t = 0 the shifted exponent is -N^alpha (0 - F(m))/2 < 0
  const double expected0 = 0.5 * params.exponent_scale() * f_beta(m, 2.0);
  CHECK(measure.log_density_shifted(0.0) ==
        doctest::Approx(expected0).epsilon(1e-12));
  CHECK(measure.log_density_shifted(0.0) < 0.0);

  for (int k = 1; k < 500; ++k) {
    const double t = -0.999 + 1.998 * k / 500.0;
    CHECK(measure.log_density_shifted(t) ==
          doctest::Approx(measure.log_density_shifted(-t)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(measure.log_density_shifted(1.0), DomainError);
  CHECK(unnormalized_log_density(m, params) ==
        doctest::Approx(-std::log(1 - m * m)).epsilon(1e-12));
}

TEST_CASE("normalization against a brute-force trapezoid oracle") {
  const DeFinettiMeasure measure(ModelParams(2.0, 2.0, 8));
  const auto integrand = [&measure](double t) {
    const double lg = measure.log_density_shifted(t);
    return lg < -745.0 ? 0.0 : std::exp(lg);
  };
  const double trapezoid = cwsc_test::oracle_trapezoid(
      integrand, -1.0 + 1e-9, 1.0 - 1e-9, 1000000);
  CHECK(measure.z_shifted() == doctest::Approx(trapezoid).epsilon(1e-7));
  CHECK(measure.z_shifted() == doctest::Approx(kZShift8).epsilon(1e-9));

  CHECK(measure.interval_mass(-1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(measure.interval_mass(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(measure.interval_mass(-1.0, 0.0) ==
        doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("cdf table is strictly increasing from 0 to 1") {
  const DeFinettiMeasure measure(ModelParams(2.0, 2.0, 32));
  const auto& grid = measure.grid();
  const auto& cdf = measure.cdf();
  REQUIRE(grid.size() == cdf.size());
  REQUIRE(grid.size() >= 2);
  CHECK(cdf.front() == 0.0);
  CHECK(cdf.back() == 1.0);
  for (std::size_t i = 1; i < cdf.size(); ++i) {
    CHECK(cdf[i] > cdf[i - 1]);
    CHECK(grid[i] > grid[i - 1]);
  }
  // resolution near the peaks: at least 64 nodes per sigma* interval
  const double sigma = measure.peak_width();
  const double m = measure.m();
  std::size_t nodes_in_sigma = 0;
  for (double t : grid) {
    if (std::abs(t - m) <= 0.5 * sigma) ++nodes_in_sigma;
  }
  CHECK(nodes_in_sigma >= 64);
}

TEST_CASE("laplace approximation of the normalization constant") {
  std::vector<double> ratios;
  for (std::int64_t n : {8, 16, 32}) {
    const ModelParams params(2.0, 2.0, n);
    const DeFinettiMeasure measure(params);
    const LaplaceApprox approx = laplace_z_approx(params);
    CHECK(approx.kappa == 2.0);
    CHECK(approx.lambda == 1.0);
    const double m = measure.m();
    CHECK(approx.q == doctest::Approx(1.0 / (1.0 - m * m)).epsilon(1e-12));
    CHECK(approx.p == doctest::Approx(0.5 * f_beta_d2(m, 2.0)).epsilon(1e-12));
    ratios.push_back(measure.z_shifted() / approx.value);
  }
  CHECK(ratios[0] == doctest::Approx(kRatio8).epsilon(1e-6));
  CHECK(ratios[1] == doctest::Approx(kRatio16).epsilon(1e-6));
  CHECK(ratios[2] == doctest::Approx(kRatio32).epsilon(1e-6));
  CHECK(std::abs(ratios[2] - 1.0) < std::abs(ratios[1] - 1.0));
  CHECK(std::abs(ratios[1] - 1.0) < std::abs(ratios[0] - 1.0));
}

TEST_CASE("central mass: oracle agreement and decay") {
  const DeFinettiMeasure at8(ModelParams(2.0, 2.0, 8));
  const auto integrand = [&at8](double t) {
    const double lg = at8.log_density_shifted(t);
    return lg < -745.0 ? 0.0 : std::exp(lg);
  };
  const double m = at8.m();
  const double trap = cwsc_test::oracle_trapezoid(integrand, -0.5 * m, 0.5 * m,
                                                  1000000) /
                      at8.z_shifted();
  CHECK(at8.central_mass() == doctest::Approx(trap).epsilon(1e-7));
  CHECK(at8.central_mass() <= 1.0);

  const double c20 = DeFinettiMeasure(ModelParams(2.0, 1.0, 20)).central_mass();
  const double c40 = DeFinettiMeasure(ModelParams(2.0, 1.0, 40)).central_mass();
  const double c80 = DeFinettiMeasure(ModelParams(2.0, 1.0, 80)).central_mass();
  CHECK(c20 == doctest::Approx(kCentral20).epsilon(1e-5));
  CHECK(c40 == doctest::Approx(kCentral40).epsilon(1e-5));
  CHECK(c80 == doctest::Approx(kCentral80).epsilon(1e-5));
  CHECK(c40 < c20);
  CHECK(c80 < c40);
}

TEST_CASE("lemma functionals match the trapezoid oracle at N=8") {
  const DeFinettiMeasure measure(ModelParams(2.0, 2.0, 8));
  const double m = measure.m();
  const auto weighted = [&measure](const std::function<double(double)>& f) {
    return [f, &measure](double t) {
      const double lg = measure.log_density_shifted(t);
      return lg < -745.0 ? 0.0 : f(t) * std::exp(lg);
    };
  };
  const double abs2_trap =
      cwsc_test::oracle_trapezoid(
          weighted([m](double t) { return (t - m) * (t - m); }), 0.5 * m,
          1.0 - 1e-9, 1000000) /
      measure.z_shifted();
  CHECK(measure.abs_moment_right(2) == doctest::Approx(abs2_trap).epsilon(1e-6));
  CHECK(measure.abs_moment_right(1) >= 0.0);

  const double mixed2_trap =
      cwsc_test::oracle_trapezoid(
          weighted([m](double t) {
            const double u = 1.0 + m * m - 2.0 * m * t;
            return u * u;
          }),
          0.5 * m, 1.0 - 1e-9, 1000000) /
      measure.z_shifted();
  CHECK(measure.mixed_moment_right(2) ==
        doctest::Approx(mixed2_trap).epsilon(1e-6));
  CHECK_THROWS_AS(measure.abs_moment_right(0), DomainError);
  CHECK_THROWS_AS(measure.mixed_moment_right(0), DomainError);
}

TEST_CASE("mixed moment limit values at N=32") {
  const DeFinettiMeasure measure(ModelParams(2.0, 2.0, 32));
  CHECK(measure.mixed_moment_right(1) ==
        doctest::Approx(kMixed32_1).epsilon(1e-6));
  CHECK(measure.mixed_moment_right(2) ==
        doctest::Approx(kMixed32_2).epsilon(1e-6));
  CHECK(measure.mixed_moment_right(3) ==
        doctest::Approx(kMixed32_3).epsilon(1e-6));
  const double m = measure.m();
  CHECK(std::abs(measure.mixed_moment_right(1) -
                 0.5 * (1.0 - m * m)) /
            (0.5 * (1.0 - m * m)) <
        0.02);
}

TEST_CASE("inverse-CDF sampler: self-consistency, symmetry, concentration") {
  const DeFinettiMeasure measure(ModelParams(2.0, 2.0, 32));
  RngStream rng(20260808);
  const std::size_t draws = 100000;
  std::vector<double> ts(draws);
  std::size_t positive = 0;
  std::size_t near_peak = 0;
  const double m = measure.m();
  const double sigma = measure.peak_width();
  for (auto& t : ts) {
    t = measure.sample_t(rng);
    if (t > 0.0) ++positive;
    if (std::abs(t - m) <= 4.0 * sigma || std::abs(t + m) <= 4.0 * sigma) {
      ++near_peak;
    }
  }
  std::sort(ts.begin(), ts.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double c = lookup_cdf(measure, ts[i]);
    ks = std::max(ks, std::abs((i + 1.0) / draws - c));
    ks = std::max(ks, std::abs(c - static_cast<double>(i) / draws));
  }
  CHECK(ks < 0.01);
  CHECK(std::abs(static_cast<double>(positive) / draws - 0.5) < 0.01);
  CHECK(static_cast<double>(near_peak) / draws >= 0.99);
}

TEST_CASE("inverse-CDF draws agree in law with the rejection sampler") {
  const DeFinettiMeasure measure(ModelParams(2.0, 2.0, 8));
  RngStream rng(7);
  std::vector<double> inverse_draws(10000);
  for (auto& t : inverse_draws) t = measure.sample_t(rng);

  std::mt19937_64 oracle_rng(991);
  const std::vector<double> rejection_draws =
      cwsc_test::oracle_rejection_sample(measure, oracle_rng, 10000);

  const double d =
      cwsc_test::oracle_two_sample_ks(inverse_draws, rejection_draws);
  // two-sample KS 1% critical value: 1.628 * sqrt((n+m)/(n m))
  CHECK(d < 1.628 * std::sqrt(2.0 / 10000.0));
}

TEST_CASE("json round trip preserves the measure") {
  const DeFinettiMeasure measure(ModelParams(2.0, 2.0, 16));
  const nlohmann::json j = measure.to_json();
  const DeFinettiMeasure loaded = DeFinettiMeasure::from_json(j);
  CHECK(loaded.z_shifted() == measure.z_shifted());
  CHECK(loaded.grid() == measure.grid());
  CHECK(loaded.cdf() == measure.cdf());
  RngStream a(5), b(5);
  for (int i = 0; i < 100; ++i) {
    CHECK(measure.sample_t(a) == loaded.sample_t(b));
  }

  nlohmann::json tampered = j;
  tampered["cdf"][1] = -0.5;
  CHECK_THROWS_AS(DeFinettiMeasure::from_json(tampered), ContractError);
  nlohmann::json wrong_m = j;
  wrong_m["m"] = 0.5;
  CHECK_THROWS_AS(DeFinettiMeasure::from_json(wrong_m), ContractError);
}

TEST_CASE("gamma at half integers") {
  const double sqrt_pi = std::sqrt(3.14159265358979323846);
  CHECK(gamma_half_integer(1) == doctest::Approx(sqrt_pi).epsilon(1e-15));
  CHECK(gamma_half_integer(2) == 1.0);
  CHECK(gamma_half_integer(3) == doctest::Approx(0.5 * sqrt_pi).epsilon(1e-15));
  CHECK(gamma_half_integer(4) == 1.0);
  CHECK(gamma_half_integer(5) ==
        doctest::Approx(0.75 * sqrt_pi).epsilon(1e-15));
  CHECK(gamma_half_integer(6) == 2.0);
  CHECK_THROWS_AS(gamma_half_integer(0), DomainError);
}

TEST_CASE("mixing expectation for general beta (including beta <= 1)") {
  // odd degree vanishes by symmetry
  CHECK(std::abs(mixing_expectation_poly(0.5, 9.0, 1)) < 1e-12);
  CHECK(std::abs(mixing_expectation_poly(2.0, 9.0, 3)) < 1e-12);
  CHECK(mixing_expectation_poly(1.5, 16.0, 0) == 1.0);

  // trapezoid cross-check at beta = 0.5, M = 9, degree 2
  const auto weight = [](double t) {
    return std::exp(-4.5 * f_beta(t, 0.5)) / (1.0 - t * t);
  };
  const double den =
      cwsc_test::oracle_trapezoid(weight, -1.0 + 1e-9, 1.0 - 1e-9, 2000000);
  const double num = cwsc_test::oracle_trapezoid(
      [&weight](double t) { return t * t * weight(t); }, -1.0 + 1e-9,
      1.0 - 1e-9, 2000000);
  CHECK(mixing_expectation_poly(0.5, 9.0, 2) ==
        doctest::Approx(num / den).epsilon(1e-7));
  CHECK_THROWS_AS(mixing_expectation_poly(0.0, 9.0, 2), DomainError);
  CHECK_THROWS_AS(mixing_expectation_poly(2.0, 0.5, 2), DomainError);
}
