// Copyright 2026 The Nearfield Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace nearfield {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Largest element count for which an M x M matrix may be materialized.
inline constexpr std::size_t kDenseElementLimit = 441;

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Input carries no information (e.g. an all-zero channel estimate).
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem exceeds a size gate (dense matrices, exhaustive grids).
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Numerically unidentifiable quantity, e.g. a vanishing phase reference.
class ConditioningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Distance fit produced a non-physical range.
class FitFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

/// Counter-derived stream: the same (seed, counters) always yields the same
/// engine state, independent of which thread asks for it.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> counters) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * counters.size());
  words.push_back(static_cast<std::uint32_t>(seed));
  words.push_back(static_cast<std::uint32_t>(seed >> 32));
  for (std::uint64_t c : counters) {
    words.push_back(static_cast<std::uint32_t>(c));
    words.push_back(static_cast<std::uint32_t>(c >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

/// Principal value of an angle, in (-pi, pi].
inline double wrap_phase(double x) {
  const double y = x - kTwoPi * std::floor((x + kPi) / kTwoPi);
  return y <= -kPi ? y + kTwoPi : y;
}

}  // namespace nearfield
