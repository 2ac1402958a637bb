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

#include "cwsc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "cwsc/errors.hpp"
#include "cwsc/scalar_math.hpp"

namespace cwsc {

std::int64_t Spectrum::count_in(double lo, double hi) const {
  const auto first =
      std::lower_bound(eigenvalues.begin(), eigenvalues.end(), lo);
  const auto last = std::upper_bound(eigenvalues.begin(), eigenvalues.end(), hi);
  return static_cast<std::int64_t>(last - first);
}

double Esd::cdf(double x) const {
  const auto it = std::upper_bound(points.begin(), points.end(), x);
  return static_cast<double>(it - points.begin()) /
         static_cast<double>(points.size());
}

double Esd::moment(int k) const {
  if (k < 0 || k > 12) {
    throw DomainError("Esd::moment: k must be in [0,12]");
  }
  double sum = 0.0;
  for (double lambda : points) sum += std::pow(lambda, k);
  return sum / static_cast<double>(points.size());
}

Spectrum eigenvalues(const Eigen::MatrixXd& matrix, const std::string& source) {
  if (matrix.rows() != matrix.cols() || matrix.rows() < 1) {
    throw ContractError("eigenvalues: matrix must be square and non-empty");
  }
  const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw ContractError("eigenvalues: matrix not symmetric (max |M-M^T| = " +
                        std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.compute(matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalues: eigensolver did not converge");
  }
  Spectrum spectrum;
  spectrum.source = source;
  spectrum.eigenvalues.assign(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + matrix.rows());
  std::sort(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end());
  return spectrum;
}

double ks_distance_semicircle(const Esd& esd) {
  const double n = static_cast<double>(esd.points.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < esd.points.size(); ++i) {
    const double g = semicircle_cdf(esd.points[i]);
    const double above = (static_cast<double>(i) + 1.0) / n - g;
    const double below = g - static_cast<double>(i) / n;
    sup = std::max({sup, above, below});
  }
  return sup;
}

double levy_distance_semicircle(const Esd& esd) {
  // Smallest eps with F(x-eps)-eps <= G(x) <= F(x+eps)+eps for all x; for a
  // step CDF it suffices to test the jump points of F.
  const double n = static_cast<double>(esd.points.size());
  const auto violated = [&](double eps) {
    for (std::size_t i = 0; i < esd.points.size(); ++i) {
      const double x = esd.points[i];
      const double f_left = static_cast<double>(i) / n;        // F(x-)
      const double f_right = (static_cast<double>(i) + 1.0) / n;  // F(x)
      if (semicircle_cdf(x - eps) - eps > f_left) return true;
      if (semicircle_cdf(x + eps) + eps < f_right) return true;
    }
    return false;
  };
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 50; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (violated(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

std::int64_t interlacing_defect(const Spectrum& a, const Spectrum& b,
                                double lo, double hi) {
  if (a.size() != b.size()) {
    throw ContractError("interlacing_defect: spectra must have equal length");
  }
  if (lo > hi) std::swap(lo, hi);
  return std::abs(a.count_in(lo, hi) - b.count_in(lo, hi));
}

void write_spectra_csv(std::ostream& os, const std::vector<Spectrum>& spectra,
                       const std::vector<std::int64_t>& replica_ids) {
  if (spectra.size() != replica_ids.size()) {
    throw ContractError("write_spectra_csv: replica id count mismatch");
  }
  os << "replica,index,eigenvalue,source\n";
  char buf[32];
  for (std::size_t r = 0; r < spectra.size(); ++r) {
    for (std::size_t i = 0; i < spectra[r].size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", spectra[r].eigenvalues[i]);
      os << replica_ids[r] << ',' << i << ',' << buf << ','
         << spectra[r].source << '\n';
    }
  }
}

}  // namespace cwsc
