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

#include <cstdint>
#include <string>

#include "nearfield/common.hpp"

namespace nearfield {

enum class PilotKind { all_ones, qpsk };

const char* to_string(PilotKind kind);
PilotKind parse_pilot_kind(const std::string& name);

struct PilotSequence {
  CVector symbols;
  double power = 1.0;

  std::size_t length() const { return static_cast<std::size_t>(symbols.size()); }
};

/// Unit-modulus pilots scaled by sqrt(power). QPSK symbols are drawn from the
/// seeded stream; all-ones ignores the seed.
PilotSequence generate_pilots(std::size_t length, double power, PilotKind kind,
                              std::uint64_t seed = 0);

/// Y (M x L) plus the pilots it was observed with.
struct ReceivedBlock {
  CMatrix observations;
  double noise_power = 0.0;
  PilotSequence pilots;
};

/// y_l = h s_l + z_l with z_l ~ CN(0, noise_power I).
ReceivedBlock transmit(const CVector& h, const PilotSequence& pilots, double noise_power,
                       Rng& rng);
ReceivedBlock transmit(const CVector& h, const PilotSequence& pilots, double noise_power,
                       std::uint64_t seed);

/// sigma^2 = P * 10^(-snr/10).
double noise_power_from_snr(double snr_db, double pilot_power = 1.0);

/// LS channel estimate; the covariance R = h h^H is kept implicit.
struct CovarianceEstimate {
  CVector ls_channel;

  /// Dense R = h h^H. Only allowed up to kDenseElementLimit elements.
  CMatrix dense() const;
};

/// h = Y s^* / (s^H s).
CovarianceEstimate ls_channel_estimate(const ReceivedBlock& block);

}  // namespace nearfield
