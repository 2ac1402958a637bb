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

#include "cwsc/quadrature.hpp"

#include <cmath>

#include <doctest.h>

#include "cwsc/errors.hpp"
#include "oracles.hpp"

using namespace cwsc;

TEST_CASE("single Kronrod panel on polynomials") {
  double err = 0.0;
  const double cubic =
      gauss_kronrod_15([](double x) { return x * x * x - 2.0 * x + 1.0; },
                       -1.0, 3.0, &err);
  // exact: [x^4/4 - x^2 + x] from -1 to 3 = 14.25 - (-1.75) = 16
  CHECK(cubic == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(err <= 1e-12);
}

TEST_CASE("adaptive integration of smooth functions") {
  const auto r1 =
      integrate_adaptive([](double x) { return std::sin(x); }, 0.0,
                         3.14159265358979323846);
  CHECK(r1.value == doctest::Approx(2.0).epsilon(1e-12));

  const auto r2 =
      integrate_adaptive([](double x) { return std::exp(-x * x); }, -6.0, 6.0);
  CHECK(r2.value == doctest::Approx(std::sqrt(3.14159265358979323846))
                        .epsilon(1e-12));
}

TEST_CASE("narrow peak converges with and without anchors") {
  const auto peak = [](double x) {
    return std::exp(-1e6 * (x - 0.3) * (x - 0.3));
  };
  const double exact = std::sqrt(3.14159265358979323846 / 1e6);
  const auto anchored = integrate_adaptive(peak, 0.0, 1.0, {0.3, 0.299, 0.301});
  CHECK(anchored.value == doctest::Approx(exact).epsilon(1e-9));
  const auto blind = integrate_adaptive(peak, 0.0, 1.0);
  CHECK(blind.value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("agrees with the trapezoid oracle on a generic integrand") {
  const auto f = [](double x) { return std::cos(3.0 * x) / (2.0 + x); };
  const double adaptive = integrate_adaptive(f, -1.0, 2.0).value;
  const double trapezoid = cwsc_test::oracle_trapezoid(f, -1.0, 2.0, 2000000);
  CHECK(adaptive == doctest::Approx(trapezoid).epsilon(1e-9));
}

TEST_CASE("non-convergence raises a numeric error") {
  const auto spiky = [](double x) {
    return std::pow(std::abs(x - 0.70710678118654752), -0.9);
  };
  QuadratureOptions opts;
  opts.max_panels = 8;
  CHECK_THROWS_AS(integrate_adaptive(spiky, 0.0, 1.0, {}, opts), NumericError);
}

TEST_CASE("bad interval raises a contract error") {
  CHECK_THROWS_AS(integrate_adaptive([](double) { return 1.0; }, 1.0, 0.0),
                  ContractError);
}
