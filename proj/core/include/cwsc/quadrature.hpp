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

#ifndef CWSC_QUADRATURE_HPP_
#define CWSC_QUADRATURE_HPP_

#include <functional>
#include <vector>

namespace cwsc {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_panels = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
  int evaluations = 0;
};

/// 15-point Gauss-Kronrod rule on [a,b]; *error is the |K15-G7| estimate.
double gauss_kronrod_15(const std::function<double(double)>& f, double a,
                        double b, double* error);

/// Adaptive panel-subdivision quadrature of f over [a,b]. The panel with the
/// largest error estimate is bisected until the summed estimate meets
/// max(abs_tol, rel_tol*|I|). Initial panel boundaries can be seeded through
/// `anchors` (values outside (a,b) are ignored). Throws NumericError if the
/// tolerance is not reached within max_panels.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const std::vector<double>& anchors = {},
                                    const QuadratureOptions& opts = {});

}  // namespace cwsc

#endif  // CWSC_QUADRATURE_HPP_
