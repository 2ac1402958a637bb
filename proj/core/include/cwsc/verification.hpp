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

#ifndef CWSC_VERIFICATION_HPP_
#define CWSC_VERIFICATION_HPP_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cwsc/definetti.hpp"
#include "cwsc/ensemble.hpp"

namespace cwsc {

// A mixed-moment expectation E[prod X(i,j)^power] over matrix entries:
// a block of pairwise-disjoint index pairs and a second block disjoint from
// the first. Indices are 0-based with i <= j.
struct MomentSpec {
  struct IndexPair {
    std::int64_t i = 0;
    std::int64_t j = 0;
    int power = 1;
  };
  std::vector<IndexPair> distinct_pairs;
  std::vector<IndexPair> repeated_pairs;

  // Throws ContractError unless all pairs are valid, pairwise disjoint
  // within the first block, and the two blocks are disjoint.
  void validate(std::int64_t n) const;
  std::string describe() const;
};

enum class MomentTarget { kX, kY };

// Structured result of one verification estimate. Exact entries carry
// standard_error = 0.
struct VerificationReport {
  std::string name;
  std::string parameters;
  double estimate = 0.0;
  double standard_error = 0.0;
  double bound_or_target = 0.0;
  bool pass = false;
  std::int64_t replicas = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static void write_csv_header(std::ostream& os);
  void write_csv_row(std::ostream& os) const;
};

/// Exact Curie-Weiss expectation over M <= 20 spins by full enumeration of
/// the 2^M configurations with log-sum-exp normalization.
double cw_expectation_bruteforce(
    int m_spins, double beta,
    const std::function<double(const std::vector<std::int8_t>&)>& observable);

/// Product observable over the listed (distinct) sites.
double cw_expectation_bruteforce_sites(int m_spins, double beta,
                                       const std::vector<int>& sites);

/// The t-integral side of the de Finetti identity for the same observable:
/// a product over k distinct sites has conditional expectation t^k.
double definetti_expectation_quadrature(int m_spins, double beta,
                                        const std::vector<int>& sites);

/// P(Bin(count, p) <= j_max), summed in log space with compensated
/// accumulation; count <= 1e6.
double binomial_tail_le(std::int64_t count, double p, std::int64_t j_max);

/// Exact P_t(S_N <= 0) = P(Bin(K, (1+t)/2) <= K/2) with K = n(n+1)/2.
double large_deviation_exact(std::int64_t n, double t);

/// The large-deviation bound e^{-q_a n^2} with q_a = -ln(1-a^2)/4.
double ld_bound(std::int64_t n, double a);

/// Closed-form conditional moment E_t[prod (X -+ m)^2] over ell disjoint
/// pairs: (1 + m^2 -+ 2 m t)^ell. branch = +1 selects the (X - m)^2 version.
double conditional_h_moment(double t, double m, int ell, int branch);

/// Monte Carlo estimate of E[prod entries^power] over fresh ensemble draws.
/// Target kX samples only the named entries (conditionally independent given
/// t); target kY requires full matrices for the indicator. Replica r uses
/// the stream mix_seed(base_seed, r). The returned report carries estimate
/// and standard error; pass/band fields are filled by apply_band.
VerificationReport mc_moment_estimate(const DeFinettiMeasure& measure,
                                      const MomentSpec& spec,
                                      MomentTarget target,
                                      std::int64_t replicas,
                                      std::uint64_t base_seed);

/// Sets report.bound_or_target = center and
/// pass = |estimate - center| <= slack + 3 * standard_error.
void apply_band(VerificationReport* report, double center, double slack);

/// Exact E[Y(i,j)] for n <= 12: quadrature over t of the entry-conditioned
/// expectation, with P_t(S_N <= 0 | X(i,j) = x) from exact binomial tails
/// over the remaining K-1 entries.
double exact_y_mean_small_n(const DeFinettiMeasure& measure, std::int64_t i,
                            std::int64_t j);

void write_reports_json(std::ostream& os,
                        const std::vector<VerificationReport>& reports);
void write_reports_csv(std::ostream& os,
                       const std::vector<VerificationReport>& reports);

}  // namespace cwsc

#endif  // CWSC_VERIFICATION_HPP_
