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

#include "cwsc/ensemble.hpp"

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "cwsc/errors.hpp"

namespace cwsc {

namespace {

constexpr std::uint32_t kMagic = 0x4D535743;  // "CWSM" little-endian
constexpr std::uint32_t kFormatVersion = 1;

inline std::int64_t upper_index(std::int64_t n, std::int64_t i,
                                std::int64_t j) {
  // Row-major packed upper triangle with diagonal: row i starts after
  // i*n - i*(i-1)/2 stored entries.
  return i * n - i * (i - 1) / 2 + (j - i);
}

template <typename T>
void write_pod(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw ContractError("SpinMatrix::load_binary: truncated stream");
  return value;
}

}  // namespace

SpinMatrix::SpinMatrix(std::int64_t n, double t, std::uint64_t seed,
                       std::vector<std::int8_t> upper)
    : n_(n), t_(t), seed_(seed), upper_(std::move(upper)) {
  if (n_ < 1) throw ParameterError("SpinMatrix: n must be >= 1");
  if (static_cast<std::int64_t>(upper_.size()) != n_ * (n_ + 1) / 2) {
    throw ContractError("SpinMatrix: upper triangle size mismatch");
  }
  for (std::int8_t v : upper_) {
    if (v != 1 && v != -1) {
      throw ContractError("SpinMatrix: entries must be -1 or +1");
    }
  }
}

int SpinMatrix::entry(std::int64_t i, std::int64_t j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) {
    throw ContractError("SpinMatrix::entry: index out of range");
  }
  if (i > j) std::swap(i, j);
  return upper_[upper_index(n_, i, j)];
}

std::int64_t SpinMatrix::entry_sum() const {
  std::int64_t sum = 0;
  for (std::int8_t v : upper_) sum += v;
  return sum;
}

Eigen::MatrixXd SpinMatrix::to_dense() const {
  Eigen::MatrixXd dense(n_, n_);
  std::int64_t idx = 0;
  for (std::int64_t i = 0; i < n_; ++i) {
    for (std::int64_t j = i; j < n_; ++j, ++idx) {
      dense(i, j) = upper_[idx];
      dense(j, i) = upper_[idx];
    }
  }
  return dense;
}

void SpinMatrix::write_csv(std::ostream& os) const {
  for (std::int64_t i = 0; i < n_; ++i) {
    for (std::int64_t j = 0; j < n_; ++j) {
      if (j > 0) os << ',';
      os << entry(i, j);
    }
    os << '\n';
  }
}

void SpinMatrix::save_binary(std::ostream& os) const {
  write_pod(os, kMagic);
  write_pod(os, kFormatVersion);
  write_pod(os, n_);
  write_pod(os, t_);
  write_pod(os, seed_);
  const std::size_t nbytes = (upper_.size() + 7) / 8;
  std::vector<std::uint8_t> packed(nbytes, 0);
  for (std::size_t k = 0; k < upper_.size(); ++k) {
    if (upper_[k] > 0) packed[k / 8] |= static_cast<std::uint8_t>(1u << (k % 8));
  }
  os.write(reinterpret_cast<const char*>(packed.data()),
           static_cast<std::streamsize>(packed.size()));
}

SpinMatrix SpinMatrix::load_binary(std::istream& is) {
  const auto magic = read_pod<std::uint32_t>(is);
  if (magic != kMagic) {
    throw ContractError("SpinMatrix::load_binary: bad magic number");
  }
  const auto version = read_pod<std::uint32_t>(is);
  if (version != kFormatVersion) {
    throw ContractError("SpinMatrix::load_binary: unsupported version " +
                        std::to_string(version));
  }
  const auto n = read_pod<std::int64_t>(is);
  const auto t = read_pod<double>(is);
  const auto seed = read_pod<std::uint64_t>(is);
  if (n < 1 || n > 1000000) {
    throw ContractError("SpinMatrix::load_binary: implausible dimension");
  }
  const std::size_t count = static_cast<std::size_t>(n * (n + 1) / 2);
  std::vector<std::uint8_t> packed((count + 7) / 8);
  is.read(reinterpret_cast<char*>(packed.data()),
          static_cast<std::streamsize>(packed.size()));
  if (!is) throw ContractError("SpinMatrix::load_binary: truncated payload");
  std::vector<std::int8_t> upper(count);
  for (std::size_t k = 0; k < count; ++k) {
    upper[k] = (packed[k / 8] >> (k % 8)) & 1u ? 1 : -1;
  }
  return SpinMatrix(n, t, seed, std::move(upper));
}

std::int64_t s_n(const SpinMatrix& x) { return x.entry_sum(); }

int indicator_plus(const SpinMatrix& x) { return s_n(x) > 0 ? 1 : 0; }

int indicator_minus(const SpinMatrix& x) { return 1 - indicator_plus(x); }

SpinMatrix sample_spin_matrix(double t, std::int64_t n, RngStream& rng) {
  if (!(std::abs(t) <= 1.0)) {
    throw DomainError("sample_spin_matrix: |t| must be <= 1");
  }
  if (n < 1) throw ParameterError("sample_spin_matrix: n must be >= 1");
  const double p_plus = 0.5 * (1.0 + t);
  std::vector<std::int8_t> upper(static_cast<std::size_t>(n * (n + 1) / 2));
  for (auto& v : upper) {
    v = static_cast<std::int8_t>(rng.sign_with_prob(p_plus));
  }
  return SpinMatrix(n, t, rng.seed(), std::move(upper));
}

SpinMatrix sample_ensemble(const DeFinettiMeasure& measure, RngStream& rng) {
  const double t = measure.sample_t(rng);
  return sample_spin_matrix(t, measure.params().n, rng);
}

DerivedMatrix::DerivedMatrix(MatrixKind kind, const SpinMatrix& base, double m)
    : kind_(kind), base_(&base), m_(m) {
  if (!(m > 0.0 && m < 1.0)) {
    throw ParameterError("DerivedMatrix: m must lie in (0,1)");
  }
  branch_sign_ = indicator_plus(base) == 1 ? +1 : -1;
  const double inv_sqrt_var = 1.0 / std::sqrt(1.0 - m * m);
  switch (kind) {
    case MatrixKind::kA:
      offset_ = 0.0;
      scale_ = inv_sqrt_var / std::sqrt(static_cast<double>(base.n()));
      active_ = true;
      break;
    case MatrixKind::kY:
      offset_ = branch_sign_ * m;
      scale_ = inv_sqrt_var;
      active_ = true;
      break;
    case MatrixKind::kYPlus:
      offset_ = m;
      scale_ = inv_sqrt_var;
      active_ = branch_sign_ > 0;
      break;
    case MatrixKind::kYMinus:
      offset_ = -m;
      scale_ = inv_sqrt_var;
      active_ = branch_sign_ < 0;
      break;
  }
}

double DerivedMatrix::entry(std::int64_t i, std::int64_t j) const {
  if (!active_) return 0.0;
  return (base_->entry(i, j) - offset_) * scale_;
}

Eigen::MatrixXd DerivedMatrix::to_dense(double extra_scale) const {
  const std::int64_t n = base_->n();
  if (!active_) return Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd dense(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = i; j < n; ++j) {
      const double v = (base_->entry(i, j) - offset_) * scale_ * extra_scale;
      dense(i, j) = v;
      dense(j, i) = v;
    }
  }
  return dense;
}

DerivedMatrix build_a(const SpinMatrix& x, double m) {
  return DerivedMatrix(MatrixKind::kA, x, m);
}

DerivedMatrix build_y(const SpinMatrix& x, double m) {
  return DerivedMatrix(MatrixKind::kY, x, m);
}

}  // namespace cwsc
