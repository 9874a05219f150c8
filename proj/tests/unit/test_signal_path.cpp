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

#include <doctest.h>

#include <cmath>

#include <nearfield/array_model.hpp>
#include <nearfield/signal_path.hpp>

using namespace nearfield;

TEST_CASE("all-ones pilots scale with power") {
  const auto p = generate_pilots(4, 1.0, PilotKind::all_ones);
  CHECK(p.length() == 4);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(p.symbols[i] == Complex(1.0, 0.0));
  const auto q = generate_pilots(2, 4.0, PilotKind::all_ones);
  for (Eigen::Index i = 0; i < 2; ++i) CHECK(q.symbols[i] == Complex(2.0, 0.0));
}

TEST_CASE("qpsk pilots are unit modulus and reproducible") {
  const auto a = generate_pilots(32, 1.0, PilotKind::qpsk, 99);
  const auto b = generate_pilots(32, 1.0, PilotKind::qpsk, 99);
  const auto c = generate_pilots(32, 1.0, PilotKind::qpsk, 100);
  CHECK(a.symbols == b.symbols);
  CHECK(a.symbols != c.symbols);
  for (Eigen::Index i = 0; i < 32; ++i) CHECK(std::abs(a.symbols[i]) == doctest::Approx(1.0));
}

TEST_CASE("pilot argument errors") {
  CHECK_THROWS_AS(generate_pilots(0, 1.0, PilotKind::all_ones), DomainError);
  CHECK_THROWS_AS(generate_pilots(3, 0.0, PilotKind::all_ones), DomainError);
  CHECK_THROWS_AS(parse_pilot_kind("bpsk"), DomainError);
  CHECK(parse_pilot_kind("qpsk") == PilotKind::qpsk);
}

TEST_CASE("noiseless transmit returns the channel") {
  const ArrayGeometry g(9, 9, 0.03);
  const CVector h = synthesize_channel(g, {0.2, 0.1, 4.0, {0.3, 0.7}}, ChannelModel::fresnel);
  const auto block = transmit(h, generate_pilots(1, 1.0, PilotKind::all_ones), 0.0, 5);
  REQUIRE(block.observations.cols() == 1);
  CHECK((block.observations.col(0) - h).norm() == 0.0);
  CHECK_THROWS_AS(transmit(h, generate_pilots(1, 1.0, PilotKind::all_ones), -1.0, 5), DomainError);
}

TEST_CASE("noise variance matches sigma squared") {
  const double sigma2 = 0.37;
  const CVector h = CVector::Zero(1);
  const auto pilots = generate_pilots(100'000, 1.0, PilotKind::all_ones);
  const auto block = transmit(h, pilots, sigma2, 1234);
  const double var = block.observations.squaredNorm() / 100'000.0;
  CHECK(std::abs(var - sigma2) < 0.05 * sigma2);
  // real and imaginary halves carry sigma^2 / 2 each
  const double re = block.observations.real().squaredNorm() / 100'000.0;
  CHECK(std::abs(re - sigma2 / 2) < 0.05 * sigma2 / 2);
}

TEST_CASE("snr to noise power") {
  CHECK(noise_power_from_snr(0.0) == doctest::Approx(1.0));
  CHECK(noise_power_from_snr(20.0) == doctest::Approx(0.01));
  CHECK(noise_power_from_snr(10.0, 2.0) == doctest::Approx(0.2));
}

TEST_CASE("ls estimate without noise") {
  const ArrayGeometry g(9, 9, 0.03);
  const CVector h = synthesize_channel(g, {-0.2, 0.3, 5.0, {1.1, -0.4}}, ChannelModel::exact);
  for (auto kind : {PilotKind::all_ones, PilotKind::qpsk}) {
    const auto block = transmit(h, generate_pilots(6, 2.5, kind, 7), 0.0, 1);
    const CVector est = ls_channel_estimate(block).ls_channel;
    CHECK((est - h).norm() / h.norm() < 1e-12);
  }
  const auto single = transmit(h, generate_pilots(1, 1.0, PilotKind::all_ones), 0.5, 3);
  CHECK(ls_channel_estimate(single).ls_channel == single.observations.col(0));
}

TEST_CASE("ls error variance is sigma squared over L P") {
  const ArrayGeometry g(9, 9, 0.03);
  const CVector h = synthesize_channel(g, {0.1, 0.1, 5.0, {1.0, 0.0}}, ChannelModel::fresnel);
  const double sigma2 = 0.8;
  const int length = 4;
  const double power = 2.0;
  const auto pilots = generate_pilots(length, power, PilotKind::qpsk, 11);
  Rng rng = make_stream(77, {});
  double acc = 0.0;
  const int trials = 10'000;
  for (int t = 0; t < trials; ++t) {
    const CVector est = ls_channel_estimate(transmit(h, pilots, sigma2, rng)).ls_channel;
    acc += (est - h).squaredNorm();
  }
  const double per_element = acc / (trials * static_cast<double>(g.element_count()));
  const double expect = sigma2 / (length * power);
  CHECK(std::abs(per_element - expect) < 0.05 * expect);
}

TEST_CASE("ls nmse drops 10 dB per decade of pilot energy") {
  const ArrayGeometry g(9, 9, 0.03);
  const CVector h = synthesize_channel(g, {0.1, 0.1, 5.0, {1.0, 0.0}}, ChannelModel::fresnel);
  auto nmse_db = [&](int length) {
    Rng rng = make_stream(5, {static_cast<std::uint64_t>(length)});
    const auto pilots = generate_pilots(static_cast<std::size_t>(length), 1.0, PilotKind::all_ones);
    double acc = 0.0;
    for (int t = 0; t < 2000; ++t) {
      acc += (ls_channel_estimate(transmit(h, pilots, 1.0, rng)).ls_channel - h).squaredNorm();
    }
    return 10.0 * std::log10(acc / 2000.0 / h.squaredNorm());
  };
  CHECK(std::abs(nmse_db(1) - 0.0) < 0.2);
  CHECK(std::abs(nmse_db(10) + 10.0) < 0.2);
}

TEST_CASE("dense covariance gate") {
  CovarianceEstimate small{CVector::Ones(441)};
  const CMatrix r = small.dense();
  CHECK(r.rows() == 441);
  CHECK(r(3, 7) == Complex(1.0, 0.0));
  CovarianceEstimate big{CVector::Ones(443)};
  CHECK_THROWS_AS(big.dense(), SizeError);
}

TEST_CASE("zero-energy pilots are rejected") {
  ReceivedBlock block;
  block.observations = CMatrix::Ones(4, 1);
  block.pilots.symbols = CVector::Zero(1);
  CHECK_THROWS_AS(ls_channel_estimate(block), DomainError);
}
