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
#include <vector>

#include <doctest.h>

#include "cwsc/errors.hpp"
#include "cwsc/quadrature.hpp"
#include "oracles.hpp"

using namespace cwsc;

namespace {
// Frozen fixtures from a 200-digit arithmetic run of the same formulas.
constexpr double kF2AtHalf = -0.13681345235020818021;
constexpr double kM2 = 0.95750402407726874068;
constexpr double kM15 = 0.85855963664011036215;
constexpr double kTiltHalf = -0.54930614433405484570;
constexpr double kQHalf = 0.071920518112945231860;
constexpr double kScCdf1 = 0.80449889052211467904;
}  // namespace

TEST_CASE("f_beta basic values and evenness") {
  CHECK(f_beta(0.0, 2.0) == 0.0);
  CHECK(f_beta(0.5, 2.0) == doctest::Approx(kF2AtHalf).epsilon(1e-15));
  for (double beta : {1.2, 2.0, 5.0}) {
    for (int k = 1; k < 1000; ++k) {
      const double t = -0.999 + 1.998 * k / 1000.0;
      CHECK(f_beta(t, beta) == doctest::Approx(f_beta(-t, beta)).epsilon(1e-14));
    }
  }
  CHECK(std::isfinite(f_beta(1.0 - 1e-12, 2.0)));
  CHECK_THROWS_AS(f_beta(1.0, 2.0), DomainError);
  CHECK_THROWS_AS(f_beta(-1.5, 2.0), DomainError);
  CHECK_THROWS_AS(f_beta(0.5, 0.0), DomainError);
}

TEST_CASE("f_beta derivatives: roots, signs, finite differences") {
  const double m = cwsc_test::oracle_magnetization(2.0);
  CHECK(f_beta_d1(0.0, 2.0) == 0.0);
  CHECK(std::abs(f_beta_d1(m, 2.0)) < 1e-10);
  CHECK(f_beta_d1(0.1, 2.0) < 0.0);   // negative on (0, m)
  CHECK(f_beta_d1(0.99, 2.0) > 0.0);  // positive on (m, 1)
  CHECK(f_beta_d2(m, 2.0) > 0.0);
  CHECK(f_beta_d2(0.0, 2.0) == doctest::Approx(-1.0).epsilon(1e-14));

  const double h = 1e-5;
  for (double beta : {1.5, 2.0, 3.0}) {
    for (double t : {-0.8, -0.4, -0.1, 0.2, 0.55, 0.9}) {
      const double fd1 = (f_beta(t + h, beta) - f_beta(t - h, beta)) / (2 * h);
      CHECK(f_beta_d1(t, beta) == doctest::Approx(fd1).epsilon(1e-6));
      const double fd2 =
          (f_beta_d1(t + h, beta) - f_beta_d1(t - h, beta)) / (2 * h);
      CHECK(f_beta_d2(t, beta) == doctest::Approx(fd2).epsilon(1e-6));
    }
  }
}

TEST_CASE("magnetization solver against the bisection oracle") {
  const Magnetization m2 = solve_magnetization(2.0);
  CHECK(m2.residual <= 1e-12);
  CHECK(m2.m == doctest::Approx(cwsc_test::oracle_magnetization(2.0))
                    .epsilon(1e-12));
  CHECK(m2.m == doctest::Approx(kM2).epsilon(1e-12));

  CHECK(solve_magnetization(1.5).m == doctest::Approx(kM15).epsilon(1e-10));
  CHECK(solve_magnetization(1.01).m < 0.2);
  for (double beta : {1.1, 1.5, 2.0, 5.0, 8.0, 12.0}) {
    const Magnetization mag = solve_magnetization(beta);
    CHECK(mag.residual <= 1e-12);
    CHECK(mag.m > 0.0);
    CHECK(mag.m < 1.0);
    CHECK(mag.m == doctest::Approx(cwsc_test::oracle_magnetization(beta))
                       .epsilon(1e-11));
  }
  CHECK_THROWS_AS(solve_magnetization(1.0), ParameterError);
  CHECK_THROWS_AS(solve_magnetization(0.5), ParameterError);
  // 1 - m drops below double resolution for very large beta
  CHECK_THROWS_AS(solve_magnetization(25.0), NumericError);
}

TEST_CASE("envelope bound dominates exp(-F/2)") {
  CHECK(envelope_bound(0.0, 2.0) == doctest::Approx(std::exp(9.0)));
  CHECK(std::exp(-0.5 * f_beta(0.999, 2.0)) <= envelope_bound(0.999, 2.0));
  for (double beta : {1.2, 2.0, 5.0}) {
    for (int k = 0; k <= 1000; ++k) {
      const double t = -(1.0 - 1e-6) + (2.0 - 2e-6) * k / 1000.0;
      CHECK(std::exp(-0.5 * f_beta(t, beta)) <=
            envelope_bound(t, beta) * (1.0 + 1e-12));
    }
    // the extreme points named by the bound
    for (double t : {1.0 - 1e-6, -(1.0 - 1e-6)}) {
      CHECK(std::exp(-0.5 * f_beta(t, beta)) <=
            envelope_bound(t, beta) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("tilt parameter and its moment identity") {
  CHECK(tilt_parameter(0.0) == 0.0);
  CHECK(tilt_parameter(0.5) == doctest::Approx(kTiltHalf).epsilon(1e-15));
  CHECK(tilt_parameter(0.3) < 0.0);
  CHECK(tilt_parameter(-0.3) > 0.0);
  for (int k = 1; k < 200; ++k) {
    const double t = -0.995 + 1.99 * k / 200.0;
    const double lam = tilt_parameter(t);
    const double lhs =
        0.5 * std::exp(lam) * (1.0 + t) + 0.5 * std::exp(-lam) * (1.0 - t);
    CHECK(lhs == doctest::Approx(std::sqrt(1.0 - t * t)).epsilon(1e-12));
  }
  const double t = 0.7;
  const double lam = tilt_parameter(t);
  CHECK(0.5 * std::exp(lam) * (1.0 + t) + 0.5 * std::exp(-lam) * (1.0 - t) ==
        doctest::Approx(std::sqrt(1.0 - t * t)).epsilon(1e-12));
  CHECK_THROWS_AS(tilt_parameter(1.0), DomainError);
}

TEST_CASE("large-deviation rate q_a") {
  CHECK(ld_rate(0.5) == doctest::Approx(kQHalf).epsilon(1e-14));
  CHECK(ld_rate(1e-8) > 0.0);
  CHECK(ld_rate(1e-8) < 1e-10);
  // Taylor: q_a ~ a^2/4 for small a
  CHECK(ld_rate(0.01) == doctest::Approx(0.01 * 0.01 / 4.0).epsilon(0.01));
  CHECK_THROWS_AS(ld_rate(0.0), DomainError);
  CHECK_THROWS_AS(ld_rate(1.0), DomainError);
  CHECK_THROWS_AS(ld_rate(-0.5), DomainError);
}

TEST_CASE("semicircle measure: density, cdf, moments") {
  CHECK(semicircle_density(2.5) == 0.0);
  CHECK(semicircle_density(-2.0) == 0.0);
  CHECK(semicircle_density(0.0) == doctest::Approx(1.0 / 3.14159265358979324));
  CHECK(semicircle_cdf(-2.0) == 0.0);
  CHECK(semicircle_cdf(2.0) == 1.0);
  CHECK(semicircle_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(semicircle_cdf(1.0) == doctest::Approx(kScCdf1).epsilon(1e-14));

  // cdf is monotone and consistent with the density
  double prev = 0.0;
  for (int k = 1; k <= 400; ++k) {
    const double x = -2.0 + 4.0 * k / 400.0;
    const double c = semicircle_cdf(x);
    CHECK(c >= prev);
    prev = c;
  }
  const double h = 1e-6;
  for (double x : {-1.5, -0.5, 0.3, 1.2}) {
    const double fd = (semicircle_cdf(x + h) - semicircle_cdf(x - h)) / (2 * h);
    CHECK(fd == doctest::Approx(semicircle_density(x)).epsilon(1e-6));
  }

  CHECK(semicircle_moment(0) == 1.0);
  CHECK(semicircle_moment(1) == 0.0);
  CHECK(semicircle_moment(2) == 1.0);
  CHECK(semicircle_moment(4) == 2.0);
  CHECK(semicircle_moment(6) == 5.0);
  CHECK(semicircle_moment(7) == 0.0);

  // quadrature route equals the Catalan recurrence to 1e-10 for k <= 10
  for (int k = 0; k <= 10; ++k) {
    const auto integrand = [k](double x) {
      return std::pow(x, k) * semicircle_density(x);
    };
    const double numeric =
        integrate_adaptive(integrand, -2.0, 2.0, {-1.0, 0.0, 1.0}).value;
    CHECK(numeric == doctest::Approx(semicircle_moment(k)).epsilon(1e-10));
  }
  CHECK_THROWS_AS(semicircle_moment(31), DomainError);
}

TEST_CASE("catalan numbers") {
  const std::vector<std::int64_t> expected = {1, 1, 2, 5, 14, 42, 132, 429};
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(catalan_number(static_cast<int>(k)) == expected[k]);
  }
  CHECK(catalan_number(30) == 3814986502092304LL);
  CHECK_THROWS_AS(catalan_number(31), DomainError);
}

TEST_CASE("least squares slope") {
  const double xs[] = {1.0, 2.0, 3.0, 4.0};
  const double ys[] = {0.5, -1.5, -3.5, -5.5};
  CHECK(least_squares_slope(xs, ys, 4) == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK_THROWS_AS(least_squares_slope(xs, ys, 1), ContractError);
}

TEST_CASE("model params validation") {
  CHECK_THROWS_AS(ModelParams(0.0, 1.0, 10), ParameterError);
  CHECK_THROWS_AS(ModelParams(2.0, 0.0, 10), ParameterError);
  CHECK_THROWS_AS(ModelParams(2.0, 1.0, 0), ParameterError);
  const ModelParams p(2.0, 2.0, 10);
  CHECK(p.exponent_scale() == doctest::Approx(100.0));
}
