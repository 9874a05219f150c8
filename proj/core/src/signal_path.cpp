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

#include "nearfield/signal_path.hpp"

#include <cmath>
#include <random>

namespace nearfield {

const char* to_string(PilotKind kind) {
  return kind == PilotKind::qpsk ? "qpsk" : "all_ones";
}

PilotKind parse_pilot_kind(const std::string& name) {
  if (name == "all_ones") return PilotKind::all_ones;
  if (name == "qpsk") return PilotKind::qpsk;
  throw DomainError("unknown pilot kind '" + name + "' (expected all_ones|qpsk)");
}

PilotSequence generate_pilots(std::size_t length, double power, PilotKind kind,
                              std::uint64_t seed) {
  if (length == 0) throw DomainError("pilot length must be at least 1");
  if (!(power > 0.0)) throw DomainError("pilot power must be positive");
  const double amplitude = std::sqrt(power);
  PilotSequence out;
  out.power = power;
  out.symbols = CVector::Constant(static_cast<Eigen::Index>(length), Complex(amplitude, 0.0));
  if (kind == PilotKind::qpsk) {
    Rng rng = make_stream(seed, {0x9170u});
    std::uniform_int_distribution<int> quadrant(0, 3);
    for (Eigen::Index l = 0; l < out.symbols.size(); ++l) {
      out.symbols[l] = std::polar(amplitude, kPi / 4.0 * (2 * quadrant(rng) + 1));
    }
  }
  return out;
}

ReceivedBlock transmit(const CVector& h, const PilotSequence& pilots, double noise_power,
                       Rng& rng) {
  if (noise_power < 0.0 || !std::isfinite(noise_power)) {
    throw DomainError("noise power must be non-negative");
  }
  ReceivedBlock block;
  block.noise_power = noise_power;
  block.pilots = pilots;
  block.observations = h * pilots.symbols.transpose();
  if (noise_power > 0.0) {
    std::normal_distribution<double> gauss(0.0, std::sqrt(noise_power / 2.0));
    // Column-major fill keeps the draw order independent of Eigen internals.
    for (Eigen::Index l = 0; l < block.observations.cols(); ++l) {
      for (Eigen::Index m = 0; m < block.observations.rows(); ++m) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        block.observations(m, l) += Complex(re, im);
      }
    }
  }
  return block;
}

ReceivedBlock transmit(const CVector& h, const PilotSequence& pilots, double noise_power,
                       std::uint64_t seed) {
  Rng rng = make_stream(seed, {0x2015u});
  return transmit(h, pilots, noise_power, rng);
}

double noise_power_from_snr(double snr_db, double pilot_power) {
  return pilot_power * std::pow(10.0, -snr_db / 10.0);
}

CMatrix CovarianceEstimate::dense() const {
  if (static_cast<std::size_t>(ls_channel.size()) > kDenseElementLimit) {
    throw SizeError("dense covariance limited to " + std::to_string(kDenseElementLimit) +
                    " elements");
  }
  return ls_channel * ls_channel.adjoint();
}

CovarianceEstimate ls_channel_estimate(const ReceivedBlock& block) {
  const CVector& s = block.pilots.symbols;
  if (block.observations.cols() != s.size()) {
    throw DomainError("observation column count does not match pilot length");
  }
  const double energy = s.squaredNorm();
  if (!(energy > 0.0)) throw DomainError("pilot sequence has zero energy");
  return {block.observations * s.conjugate() / energy};
}

}  // namespace nearfield
