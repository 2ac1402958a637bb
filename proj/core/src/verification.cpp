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

#include "cwsc/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cwsc/errors.hpp"
#include "cwsc/experiments.hpp"

namespace cwsc {

namespace {

std::pair<std::int64_t, std::int64_t> ordered(std::int64_t i, std::int64_t j) {
  return i <= j ? std::make_pair(i, j) : std::make_pair(j, i);
}

}  // namespace

void MomentSpec::validate(std::int64_t n) const {
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  const auto check_block = [&](const std::vector<IndexPair>& block,
                               bool require_disjoint_within) {
    for (const IndexPair& p : block) {
      if (p.i < 0 || p.j < 0 || p.i >= n || p.j >= n) {
        throw ContractError("MomentSpec: index pair out of range");
      }
      if (p.power < 1) {
        throw ContractError("MomentSpec: powers must be >= 1");
      }
      const auto key = ordered(p.i, p.j);
      if (!seen.insert(key).second && require_disjoint_within) {
        throw ContractError("MomentSpec: pairs must be pairwise disjoint");
      }
    }
  };
  check_block(distinct_pairs, true);
  check_block(repeated_pairs, true);  // also disjoint from the first block
  if (distinct_pairs.empty() && repeated_pairs.empty()) {
    throw ContractError("MomentSpec: no index pairs given");
  }
}

std::string MomentSpec::describe() const {
  std::ostringstream os;
  const auto put = [&os](const std::vector<IndexPair>& block) {
    for (const IndexPair& p : block) {
      os << "(" << p.i << "," << p.j << ")";
      if (p.power != 1) os << "^" << p.power;
    }
  };
  put(distinct_pairs);
  if (!repeated_pairs.empty()) {
    os << "*";
    put(repeated_pairs);
  }
  return os.str();
}

double cw_expectation_bruteforce(
    int m_spins, double beta,
    const std::function<double(const std::vector<std::int8_t>&)>& observable) {
  if (m_spins < 1 || m_spins > 20) {
    throw CapacityError("cw_expectation_bruteforce: m_spins must be in "
                        "[1,20], got " +
                        std::to_string(m_spins));
  }
  if (!(beta >= 0.0)) {
    throw DomainError("cw_expectation_bruteforce: beta must be >= 0");
  }
  const double log_w_max = 0.5 * beta * m_spins;  // at |S| = M
  const std::uint32_t configs = 1u << m_spins;
  std::vector<std::int8_t> spins(m_spins);
  double weight_sum = 0.0;
  double value_sum = 0.0;
  for (std::uint32_t mask = 0; mask < configs; ++mask) {
    const int s = 2 * __builtin_popcount(mask) - m_spins;
    const double w =
        std::exp(beta * s * s / (2.0 * m_spins) - log_w_max);
    for (int b = 0; b < m_spins; ++b) {
      spins[b] = (mask >> b) & 1u ? 1 : -1;
    }
    weight_sum += w;
    value_sum += w * observable(spins);
  }
  return value_sum / weight_sum;
}

double cw_expectation_bruteforce_sites(int m_spins, double beta,
                                       const std::vector<int>& sites) {
  std::set<int> unique(sites.begin(), sites.end());
  if (unique.size() != sites.size()) {
    throw ContractError("cw_expectation_bruteforce_sites: sites must be "
                        "distinct");
  }
  for (int s : sites) {
    if (s < 0 || s >= m_spins) {
      throw ContractError("cw_expectation_bruteforce_sites: site out of "
                          "range");
    }
  }
  return cw_expectation_bruteforce(
      m_spins, beta, [&sites](const std::vector<std::int8_t>& spins) {
        double prod = 1.0;
        for (int s : sites) prod *= spins[s];
        return prod;
      });
}

double definetti_expectation_quadrature(int m_spins, double beta,
                                        const std::vector<int>& sites) {
  std::set<int> unique(sites.begin(), sites.end());
  if (unique.size() != sites.size()) {
    throw ContractError("definetti_expectation_quadrature: sites must be "
                        "distinct");
  }
  for (int s : sites) {
    if (s < 0 || s >= m_spins) {
      throw ContractError("definetti_expectation_quadrature: site out of "
                          "range");
    }
  }
  return mixing_expectation_poly(beta, static_cast<double>(m_spins),
                                 static_cast<int>(sites.size()));
}

double binomial_tail_le(std::int64_t count, double p, std::int64_t j_max) {
  if (count < 1 || count > 1000000) {
    throw CapacityError("binomial_tail_le: count must be in [1, 1e6]");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("binomial_tail_le: p must be in [0,1]");
  }
  if (j_max < 0) return 0.0;
  if (j_max >= count) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;

  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  // log term_j, built by the exact ratio recurrence from term_0 = count*log_q.
  std::vector<double> log_terms(static_cast<std::size_t>(j_max) + 1);
  log_terms[0] = count * log_q;
  for (std::int64_t j = 0; j < j_max; ++j) {
    log_terms[j + 1] = log_terms[j] +
                       std::log(static_cast<double>(count - j) /
                                static_cast<double>(j + 1)) +
                       log_p - log_q;
  }
  const double log_max =
      *std::max_element(log_terms.begin(), log_terms.end());
  if (log_max == -std::numeric_limits<double>::infinity()) return 0.0;
  // Kahan-compensated sum of the rescaled terms.
  double sum = 0.0, carry = 0.0;
  for (double lt : log_terms) {
    const double term = std::exp(lt - log_max);
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  const double log_result = log_max + std::log(sum);
  return log_result < -745.0 ? 0.0 : std::min(1.0, std::exp(log_result));
}

double large_deviation_exact(std::int64_t n, double t) {
  if (n < 1) throw ParameterError("large_deviation_exact: n must be >= 1");
  if (!(std::abs(t) <= 1.0)) {
    throw DomainError("large_deviation_exact: |t| must be <= 1");
  }
  const std::int64_t entries = n * (n + 1) / 2;
  if (entries > 1000000) {
    throw CapacityError("large_deviation_exact: n(n+1)/2 exceeds 1e6");
  }
  if (t == 1.0) return 0.0;
  if (t == -1.0) return 1.0;
  // S_N = 2B - K <= 0 iff B <= K/2.
  return binomial_tail_le(entries, 0.5 * (1.0 + t), entries / 2);
}

double ld_bound(std::int64_t n, double a) {
  if (n < 1) throw ParameterError("ld_bound: n must be >= 1");
  const double q = ld_rate(a);  // validates a in (0,1)
  return std::exp(-q * static_cast<double>(n) * static_cast<double>(n));
}

double conditional_h_moment(double t, double m, int ell, int branch) {
  if (!(std::abs(t) <= 1.0)) {
    throw DomainError("conditional_h_moment: |t| must be <= 1");
  }
  if (!(m > 0.0 && m < 1.0)) {
    throw ParameterError("conditional_h_moment: m must be in (0,1)");
  }
  if (ell < 1) throw DomainError("conditional_h_moment: ell must be >= 1");
  if (branch != 1 && branch != -1) {
    throw ContractError("conditional_h_moment: branch must be +-1");
  }
  return std::pow(1.0 + m * m - branch * 2.0 * m * t, ell);
}

VerificationReport mc_moment_estimate(const DeFinettiMeasure& measure,
                                      const MomentSpec& spec,
                                      MomentTarget target,
                                      std::int64_t replicas,
                                      std::uint64_t base_seed) {
  const std::int64_t n = measure.params().n;
  spec.validate(n);
  if (replicas < 1000) {
    throw ParameterError("mc_moment_estimate: need >= 1000 replicas");
  }
  const double m = measure.m();
  const double inv_sqrt_var = 1.0 / std::sqrt(1.0 - m * m);

  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t r = 0; r < replicas; ++r) {
    RngStream rng = RngStream::for_replica(base_seed, r);
    double value = 1.0;
    if (target == MomentTarget::kX) {
      const double t = measure.sample_t(rng);
      const double p_plus = 0.5 * (1.0 + t);
      const auto draw_block = [&](const std::vector<MomentSpec::IndexPair>& b) {
        for (const auto& pair : b) {
          const int x = rng.sign_with_prob(p_plus);
          value *= pair.power == 1 ? x : std::pow(x, pair.power);
        }
      };
      draw_block(spec.distinct_pairs);
      draw_block(spec.repeated_pairs);
    } else {
      const SpinMatrix x = sample_ensemble(measure, rng);
      const int s = indicator_plus(x) == 1 ? +1 : -1;
      const auto draw_block = [&](const std::vector<MomentSpec::IndexPair>& b) {
        for (const auto& pair : b) {
          const double y = (x.entry(pair.i, pair.j) - s * m) * inv_sqrt_var;
          value *= pair.power == 1 ? y : std::pow(y, pair.power);
        }
      };
      draw_block(spec.distinct_pairs);
      draw_block(spec.repeated_pairs);
    }
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / static_cast<double>(replicas);
  const double var =
      std::max(0.0, (sum_sq - static_cast<double>(replicas) * mean * mean) /
                        static_cast<double>(replicas - 1));
  VerificationReport report;
  report.name = target == MomentTarget::kX ? "mc_moment_x" : "mc_moment_y";
  report.parameters = spec.describe() + " beta=" +
                      std::to_string(measure.params().beta) + " alpha=" +
                      std::to_string(measure.params().alpha) + " n=" +
                      std::to_string(n);
  report.estimate = mean;
  report.standard_error = std::sqrt(var / static_cast<double>(replicas));
  report.replicas = replicas;
  report.seed = base_seed;
  return report;
}

void apply_band(VerificationReport* report, double center, double slack) {
  report->bound_or_target = center;
  report->pass = std::abs(report->estimate - center) <=
                 slack + 3.0 * report->standard_error;
}

double exact_y_mean_small_n(const DeFinettiMeasure& measure, std::int64_t i,
                            std::int64_t j) {
  const std::int64_t n = measure.params().n;
  if (n > 12) {
    throw CapacityError("exact_y_mean_small_n: n must be <= 12");
  }
  if (i < 0 || j < 0 || i >= n || j >= n) {
    throw ContractError("exact_y_mean_small_n: index out of range");
  }
  const std::int64_t rest = n * (n + 1) / 2 - 1;  // entries besides (i,j)
  const double m = measure.m();
  const double inv_sqrt_var = 1.0 / std::sqrt(1.0 - m * m);
  // E_t[Y(i,j)] = sum_x P_t(X=x) (x - m E_t[s | X=x]) / sqrt(1-m^2), with
  // s = 1 - 2*1{S<=0} and S = x + S_rest.
  const auto h = [rest, m, inv_sqrt_var](double t) {
    const double p_plus = 0.5 * (1.0 + t);
    double value = 0.0;
    for (int x : {+1, -1}) {
      double tail;
      if (rest == 0) {
        tail = x < 0 ? 1.0 : 0.0;  // S = x alone
      } else {
        const std::int64_t d = rest - x;
        const std::int64_t j_max = d >= 0 ? d / 2 : -((-d + 1) / 2);
        tail = binomial_tail_le(rest, p_plus, j_max);
      }
      const double s_mean = 1.0 - 2.0 * tail;
      const double p_x = x > 0 ? p_plus : 1.0 - p_plus;
      value += p_x * (x - m * s_mean) * inv_sqrt_var;
    }
    return value;
  };
  return measure.expect(h);
}

nlohmann::json VerificationReport::to_json() const {
  return nlohmann::json{{"name", name},
                        {"parameters", parameters},
                        {"estimate", estimate},
                        {"standard_error", standard_error},
                        {"bound_or_target", bound_or_target},
                        {"pass", pass},
                        {"replicas", replicas},
                        {"seed", seed}};
}

void VerificationReport::write_csv_header(std::ostream& os) {
  os << "name,parameters,estimate,standard_error,bound_or_target,pass,"
        "replicas,seed\n";
}

void VerificationReport::write_csv_row(std::ostream& os) const {
  os << csv_field(name) << ',' << csv_field(parameters) << ','
     << format_real(estimate) << ',' << format_real(standard_error) << ','
     << format_real(bound_or_target) << ',' << (pass ? "true" : "false") << ','
     << replicas << ',' << seed << '\n';
}

void write_reports_json(std::ostream& os,
                        const std::vector<VerificationReport>& reports) {
  nlohmann::json array = nlohmann::json::array();
  for (const auto& r : reports) array.push_back(r.to_json());
  os << array.dump(2) << '\n';
}

void write_reports_csv(std::ostream& os,
                       const std::vector<VerificationReport>& reports) {
  VerificationReport::write_csv_header(os);
  for (const auto& r : reports) r.write_csv_row(os);
}

}  // namespace cwsc
