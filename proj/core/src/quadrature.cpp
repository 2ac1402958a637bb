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

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

#include "cwsc/errors.hpp"

namespace cwsc {

namespace {

// Kronrod-15 abscissae on [-1,1] (positive half) and weights; the
// even-indexed nodes form the embedded Gauss-7 rule.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a,
                     double b) {
  double err = 0.0;
  Panel p;
  p.a = a;
  p.b = b;
  p.value = gauss_kronrod_15(f, a, b, &err);
  p.error = err;
  return p;
}

}  // namespace

double gauss_kronrod_15(const std::function<double(double)>& f, double a,
                        double b, double* error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double result_kronrod = kWgk[7] * f(center);
  double result_gauss = kWg[3] * f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    result_kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) {
      result_gauss += kWg[j / 2] * fsum;
    }
  }
  result_kronrod *= half;
  result_gauss *= half;
  if (error != nullptr) {
    *error = std::abs(result_kronrod - result_gauss);
  }
  return result_kronrod;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    const std::vector<double>& anchors,
                                    const QuadratureOptions& opts) {
  if (!(a < b)) {
    throw ContractError("integrate_adaptive: need a < b");
  }
  std::vector<double> cuts;
  cuts.push_back(a);
  cuts.push_back(b);
  for (double t : anchors) {
    if (t > a && t < b) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel> queue;
  double total = 0.0;
  double total_error = 0.0;
  int evaluations = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = evaluate_panel(f, cuts[i], cuts[i + 1]);
    evaluations += 15;
    total += p.value;
    total_error += p.error;
    queue.push(p);
  }

  while (true) {
    const double target =
        std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
    if (total_error <= target) break;
    if (static_cast<int>(queue.size()) >= opts.max_panels) {
      throw NumericError(
          "integrate_adaptive: tolerance not reached with " +
          std::to_string(queue.size()) + " panels (error estimate " +
          std::to_string(total_error) + ", target " + std::to_string(target) +
          ")");
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Panel is at floating-point resolution; keep its estimate as-is.
      total_error -= worst.error;
      Panel frozen = worst;
      frozen.error = 0.0;
      queue.push(frozen);
      continue;
    }
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    evaluations += 30;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  QuadratureResult result;
  result.value = total;
  result.error_estimate = total_error;
  result.panels = static_cast<int>(queue.size());
  result.evaluations = evaluations;
  return result;
}

}  // namespace cwsc
