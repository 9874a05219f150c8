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
#include <nearfield_oracles/oracles.hpp>

using namespace nearfield;

namespace {

const ArrayGeometry kArray41(41, 41, 0.03);

// Fresnel/exact vector gap at the Rayleigh distance, pinned from the first run.
constexpr double kRayleighGap = 1.796974e-3;

double max_phase_gap(const CVector& a, const CVector& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(std::arg(a[i] * std::conj(b[i]))));
  }
  return worst;
}

}  // namespace

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(ArrayGeometry(40, 41, 0.03), DomainError);
  CHECK_THROWS_AS(ArrayGeometry(41, 0, 0.03), DomainError);
  CHECK_THROWS_AS(ArrayGeometry(41, 41, -1.0), DomainError);
  CHECK_THROWS_AS(ArrayGeometry(41, 41, 0.03, 0.0), DomainError);
  CHECK(kArray41.spacing() == doctest::Approx(0.0075));
  CHECK(kArray41.element_count() == 1681);
  CHECK(kArray41.center_index() == 840);
}

TEST_CASE("antenna index corners and center") {
  CHECK(antenna_index(0, 0, kArray41) == 840);
  CHECK(antenna_index(-20, -20, kArray41) == 0);
  CHECK(antenna_index(20, 20, kArray41) == 1680);
  CHECK_THROWS_AS(antenna_index(21, 0, kArray41), DomainError);
  CHECK_THROWS_AS(antenna_coords(1681, kArray41), DomainError);
}

TEST_CASE("antenna index is a bijection with column-major layout") {
  const ArrayGeometry g(5, 3, 1.0);
  std::vector<int> seen(g.element_count(), 0);
  for (int mz = -g.half_z(); mz <= g.half_z(); ++mz) {
    for (int my = -g.half_y(); my <= g.half_y(); ++my) {
      const std::size_t m = antenna_index(my, mz, g);
      REQUIRE(m < g.element_count());
      ++seen[m];
      CHECK(antenna_coords(m, g) == AntennaCoords{my, mz});
      // mirror element
      CHECK(antenna_index(-my, -mz, g) == g.element_count() - 1 - m);
    }
  }
  for (int s : seen) CHECK(s == 1);
  CHECK(antenna_index(-1, -1, g) + 1 == antenna_index(0, -1, g));
}

TEST_CASE("rayleigh distance") {
  CHECK(rayleigh_distance(256 * 0.03 / 4, 0.03) == doctest::Approx(245.76).epsilon(1e-12));
  CHECK(rayleigh_distance(0.0, 0.03) == 0.0);
  CHECK(rayleigh_distance(1.0, 2.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(rayleigh_distance(-1.0, 0.03), DomainError);
  CHECK_THROWS_AS(rayleigh_distance(1.0, 0.0), DomainError);
}

TEST_CASE("source truth validation") {
  CHECK_THROWS_AS((SourceTruth{0.9, 0.9, 5.0}).validate(), DomainError);
  CHECK_THROWS_AS((SourceTruth{0.1, 0.1, 0.0}).validate(), DomainError);
  CHECK_NOTHROW((SourceTruth{0.6, 0.8, 5.0}).validate());
  const auto s = SourceTruth::from_angles(0.3, 0.4, 7.0);
  CHECK(s.u == doctest::Approx(std::sin(0.3)));
  CHECK(s.v == doctest::Approx(std::cos(0.3) * std::sin(0.4)));
}

TEST_CASE("fresnel steering at boresight") {
  const double r = 4.0;
  const auto b = steering_fresnel(kArray41, 0.0, 0.0, r).entries;
  const double d = kArray41.spacing();
  for (int mz = -20; mz <= 20; mz += 7) {
    for (int my = -20; my <= 20; my += 3) {
      const double expect = -kPi * d * d / (0.03 * r) * (my * my + mz * mz);
      const Complex got = b[static_cast<Eigen::Index>(antenna_index(my, mz, kArray41))];
      CHECK(std::abs(got - std::polar(1.0, expect)) < 1e-12);
    }
  }
}

TEST_CASE("center element is one for both models") {
  for (double r : {3.5, 10.0, 200.0}) {
    const auto bf = steering_fresnel(kArray41, 0.4, -0.3, r).entries;
    const auto be = steering_exact(kArray41, 0.4, -0.3, r).entries;
    CHECK(std::abs(bf[840] - Complex(1.0, 0.0)) == 0.0);
    CHECK(std::abs(be[840] - Complex(1.0, 0.0)) < 1e-15);
  }
}

TEST_CASE("exact element distance matches 3D coordinates") {
  const double d = 0.0075;
  CHECK(element_distance(3, 4, 0.0, 0.0, 5.0, d) ==
        doctest::Approx(std::sqrt(25.0 + 25.0 * d * d)).epsilon(1e-14));
  for (double u : {-0.7, 0.0, 0.35}) {
    for (double v : {-0.5, 0.2, 0.6}) {
      for (double r : {3.0, 8.0, 40.0}) {
        for (int my : {-20, -3, 0, 11}) {
          for (int mz : {-17, 0, 5, 20}) {
            CHECK(std::abs(element_distance(my, mz, u, v, r, d) -
                           oracle::distance_3d(my, mz, u, v, r, d)) < 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("fresnel phase error at 3 m stays below 0.2 rad") {
  const double err = max_phase_gap(steering_fresnel(kArray41, 0.5, 0.5, 3.0).entries,
                                   steering_exact(kArray41, 0.5, 0.5, 3.0).entries);
  CHECK(err < 0.2);
  CHECK(err == doctest::Approx(oracle::max_fresnel_phase_error(kArray41, 0.5, 0.5, 3.0)).epsilon(1e-6));
}

TEST_CASE("fresnel error shrinks with range") {
  double prev = 1e9;
  for (double r : {3.0, 4.0, 6.0, 10.0, 20.0, 50.0}) {
    const double err = oracle::max_fresnel_phase_error(kArray41, 0.5, 0.5, r);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("fresnel versus exact at the rayleigh distance") {
  const double r = rayleigh_distance(kArray41.aperture(), kArray41.wavelength());
  CHECK(r == doctest::Approx(6.30375));
  const SourceTruth src{0.3, -0.2, r, {0.6, -0.8}};
  const CVector hf = synthesize_channel(kArray41, src, ChannelModel::fresnel);
  const CVector he = synthesize_channel(kArray41, src, ChannelModel::exact);
  const double rel = (hf - he).norm() / he.norm();
  CHECK(rel == doctest::Approx(kRayleighGap).epsilon(1e-6));
  CHECK(rel < 0.02);
}

TEST_CASE("synthesize channel norms and zero gain") {
  const SourceTruth zero{0.1, 0.2, 5.0, {0.0, 0.0}};
  CHECK(synthesize_channel(kArray41, zero, ChannelModel::exact).norm() == 0.0);
  for (auto model : {ChannelModel::exact, ChannelModel::fresnel}) {
    const SourceTruth s{-0.4, 0.35, 4.2, {1.5, 2.0}};
    const CVector h = synthesize_channel(kArray41, s, model);
    CHECK(h.squaredNorm() == doctest::Approx(6.25 * 1681).epsilon(1e-12));
  }
}

TEST_CASE("fresnel steering mirror identity") {
  // q is even in (m_y, m_z), so b[m] conj(b[M-1-m]) depends only on the angles.
  const auto b1 = steering_fresnel(kArray41, 0.23, -0.41, 4.0).entries;
  const auto b2 = steering_fresnel(kArray41, 0.23, -0.41, 60.0).entries;
  const Eigen::Index n = b1.size();
  for (Eigen::Index m = 0; m < n; m += 37) {
    const Complex p1 = b1[m] * std::conj(b1[n - 1 - m]);
    const Complex p2 = b2[m] * std::conj(b2[n - 1 - m]);
    CHECK(std::abs(p1 - p2) < 1e-12);
  }
}

TEST_CASE("channel model names") {
  CHECK(parse_channel_model("exact") == ChannelModel::exact);
  CHECK(std::string(to_string(ChannelModel::fresnel)) == "fresnel");
  CHECK_THROWS_AS(parse_channel_model("spherical"), DomainError);
}
