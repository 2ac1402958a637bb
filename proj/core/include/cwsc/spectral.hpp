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

#ifndef CWSC_SPECTRAL_HPP_
#define CWSC_SPECTRAL_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace cwsc {

// Sorted eigenvalues of a real symmetric matrix.
struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  std::string source;

  std::size_t size() const { return eigenvalues.size(); }
  // Number of eigenvalues in the closed interval [lo, hi].
  std::int64_t count_in(double lo, double hi) const;
};

// Empirical spectral distribution: the step CDF that jumps 1/n at each
// eigenvalue.
struct Esd {
  std::vector<double> points;  // ascending

  explicit Esd(const Spectrum& spectrum) : points(spectrum.eigenvalues) {}
  explicit Esd(std::vector<double> sorted_points)
      : points(std::move(sorted_points)) {}

  double cdf(double x) const;
  // k-th moment (1/n) sum lambda_i^k, k <= 12.
  double moment(int k) const;
};

/// All eigenvalues of a dense symmetric matrix (tridiagonalization plus
/// implicit-shift QL/QR). Input must be symmetric within 1e-12 entrywise.
Spectrum eigenvalues(const Eigen::MatrixXd& matrix,
                     const std::string& source = "");

/// Exact sup-distance between a step CDF and the semicircle CDF, evaluated
/// from both sides of every jump.
double ks_distance_semicircle(const Esd& esd);

/// Levy distance to the semicircle law (secondary weak-convergence proxy).
double levy_distance_semicircle(const Esd& esd);

/// |#eigenvalues of a in [lo,hi] - #eigenvalues of b in [lo,hi]|.
std::int64_t interlacing_defect(const Spectrum& a, const Spectrum& b,
                                double lo, double hi);

/// CSV export: one eigenvalue per row with a replica-id column.
void write_spectra_csv(std::ostream& os,
                       const std::vector<Spectrum>& spectra,
                       const std::vector<std::int64_t>& replica_ids);

}  // namespace cwsc

#endif  // CWSC_SPECTRAL_HPP_
