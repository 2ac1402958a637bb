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

#ifndef CWSC_ENSEMBLE_HPP_
#define CWSC_ENSEMBLE_HPP_

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "cwsc/definetti.hpp"
#include "cwsc/rng.hpp"

namespace cwsc {

// Symmetric n x n sign matrix stored as the packed upper triangle
// (row-major, diagonal included). Immutable after sampling; `t` records the
// mixing parameter the entries were drawn with (metadata for conditional-law
// tests, never consumed by estimators that only see the matrix).
class SpinMatrix {
 public:
  SpinMatrix(std::int64_t n, double t, std::uint64_t seed,
             std::vector<std::int8_t> upper);

  std::int64_t n() const { return n_; }
  double t() const { return t_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t upper_count() const {
    return static_cast<std::int64_t>(upper_.size());
  }

  // Symmetric access, entry(i,j) == entry(j,i), values in {-1,+1}.
  int entry(std::int64_t i, std::int64_t j) const;
  const std::vector<std::int8_t>& upper() const { return upper_; }

  // Sum of the upper-triangle entries (diagonal included).
  std::int64_t entry_sum() const;

  Eigen::MatrixXd to_dense() const;
  void write_csv(std::ostream& os) const;
  void save_binary(std::ostream& os) const;
  static SpinMatrix load_binary(std::istream& is);

 private:
  std::int64_t n_;
  double t_;
  std::uint64_t seed_;
  std::vector<std::int8_t> upper_;
};

/// S_N, the sum of the n(n+1)/2 upper-triangle entries.
std::int64_t s_n(const SpinMatrix& x);

/// 1 iff S_N > 0; the tie S_N = 0 belongs to the minus branch.
int indicator_plus(const SpinMatrix& x);
int indicator_minus(const SpinMatrix& x);

/// Fill the upper triangle with independent signs that are +1 with
/// probability (1+t)/2. Deterministic given the stream.
SpinMatrix sample_spin_matrix(double t, std::int64_t n, RngStream& rng);

/// Draw t from the mixing measure, then the conditional sign matrix.
SpinMatrix sample_ensemble(const DeFinettiMeasure& measure, RngStream& rng);

enum class MatrixKind { kA, kYPlus, kYMinus, kY };

// View of a spin matrix as one of the derived ensembles:
//   A      = X / sqrt(n (1-m^2))
//   Y_+-   = (X -+ m E) 1{S_N >< 0} / sqrt(1-m^2)
//   Y      = Y_+ + Y_-
// Entries are materialized to dense floating point only at the spectral
// boundary. Holds a non-owning pointer to the base matrix.
class DerivedMatrix {
 public:
  DerivedMatrix(MatrixKind kind, const SpinMatrix& base, double m);

  MatrixKind kind() const { return kind_; }
  const SpinMatrix& base() const { return *base_; }
  double m() const { return m_; }
  // Indicator sign of the underlying sample: +1 if S_N > 0 else -1.
  int branch_sign() const { return branch_sign_; }

  double entry(std::int64_t i, std::int64_t j) const;
  Eigen::MatrixXd to_dense(double extra_scale = 1.0) const;

 private:
  MatrixKind kind_;
  const SpinMatrix* base_;
  double m_;
  int branch_sign_;
  double scale_;   // multiplies every (shifted) entry
  double offset_;  // subtracted from each raw sign before scaling
  bool active_;    // false for the Y_+- branch the indicator switched off
};

DerivedMatrix build_a(const SpinMatrix& x, double m);
DerivedMatrix build_y(const SpinMatrix& x, double m);

// Rank-1 matrix of all ones; eigenvalues {n, 0, ..., 0}.
struct AllOnes {
  std::int64_t n = 0;
  explicit AllOnes(std::int64_t n_) : n(n_) {}
  Eigen::MatrixXd to_dense(double scale = 1.0) const {
    return Eigen::MatrixXd::Constant(n, n, scale);
  }
};

}  // namespace cwsc

#endif  // CWSC_ENSEMBLE_HPP_
