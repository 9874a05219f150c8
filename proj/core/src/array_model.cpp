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

#include "nearfield/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nearfield {

const char* to_string(ChannelModel model) {
  return model == ChannelModel::exact ? "exact" : "fresnel";
}

ChannelModel parse_channel_model(const std::string& name) {
  if (name == "exact") return ChannelModel::exact;
  if (name == "fresnel") return ChannelModel::fresnel;
  throw DomainError("unknown channel model '" + name + "' (expected exact|fresnel)");
}

ArrayGeometry::ArrayGeometry(int m_y_count, int m_z_count, double wavelength,
                             std::optional<double> spacing)
    : m_y_count_(m_y_count),
      m_z_count_(m_z_count),
      spacing_(spacing.value_or(wavelength / 4.0)),
      wavelength_(wavelength) {
  if (m_y_count_ < 1 || m_z_count_ < 1 || m_y_count_ % 2 == 0 || m_z_count_ % 2 == 0) {
    throw DomainError("array dimensions must be positive odd integers, got " +
                      std::to_string(m_y_count_) + "x" + std::to_string(m_z_count_));
  }
  if (!(wavelength_ > 0.0) || !std::isfinite(wavelength_)) {
    throw DomainError("wavelength must be positive");
  }
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
    throw DomainError("element spacing must be positive");
  }
}

double ArrayGeometry::aperture() const {
  return static_cast<double>(std::max(m_y_count_, m_z_count_)) * spacing_;
}

std::size_t antenna_index(int m_y, int m_z, const ArrayGeometry& geom) {
  if (std::abs(m_y) > geom.half_y() || std::abs(m_z) > geom.half_z()) {
    throw DomainError("antenna offset (" + std::to_string(m_y) + ", " + std::to_string(m_z) +
                      ") outside the array");
  }
  const long long m = static_cast<long long>(geom.m_y_count()) * m_z + m_y +
                      static_cast<long long>(geom.center_index());
  return static_cast<std::size_t>(m);
}

AntennaCoords antenna_coords(std::size_t m, const ArrayGeometry& geom) {
  if (m >= geom.element_count()) {
    throw DomainError("antenna index " + std::to_string(m) + " out of range");
  }
  const auto my_count = static_cast<std::size_t>(geom.m_y_count());
  const int col = static_cast<int>(m / my_count);
  const int row = static_cast<int>(m % my_count);
  return {row - geom.half_y(), col - geom.half_z()};
}

double rayleigh_distance(double aperture, double wavelength) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be positive");
  if (aperture < 0.0) throw DomainError("aperture must be non-negative");
  return 2.0 * aperture * aperture / wavelength;
}

double fresnel_floor(const ArrayGeometry& geom, double aperture_multiple) {
  return aperture_multiple * geom.aperture();
}

SourceTruth SourceTruth::from_angles(double azimuth, double elevation, double range,
                                     Complex gain) {
  SourceTruth s;
  s.u = std::sin(azimuth);
  s.v = std::cos(azimuth) * std::sin(elevation);
  s.r = range;
  s.beta = gain;
  return s;
}

void SourceTruth::validate() const {
  if (!std::isfinite(u) || !std::isfinite(v) || u * u + v * v > 1.0 + 1e-12) {
    throw DomainError("direction cosines must satisfy u^2 + v^2 <= 1");
  }
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("range must be positive");
}

double linear_path_term(int m_y, int m_z, double u, double v, double spacing) {
  return (m_z * u - m_y * v) * spacing;
}

double quadratic_path_term(int m_y, int m_z, double u, double v, double r, double spacing) {
  const double w = m_z * u - m_y * v;
  const double rho = static_cast<double>(m_z) * m_z + static_cast<double>(m_y) * m_y;
  return spacing * spacing / (2.0 * r) * (rho - w * w);
}

double element_distance(int m_y, int m_z, double u, double v, double r, double spacing) {
  const double p = linear_path_term(m_y, m_z, u, v, spacing);
  const double rho = static_cast<double>(m_z) * m_z + static_cast<double>(m_y) * m_y;
  return std::sqrt(r * r + 2.0 * r * p + spacing * spacing * rho);
}

namespace {

// Fills entries column by column (m_z outer), which is the linear index order.
template <typename PhaseFn>
CVector fill_unit_modulus(const ArrayGeometry& geom, PhaseFn&& phase) {
  CVector out(static_cast<Eigen::Index>(geom.element_count()));
  Eigen::Index m = 0;
  for (int mz = -geom.half_z(); mz <= geom.half_z(); ++mz) {
    for (int my = -geom.half_y(); my <= geom.half_y(); ++my, ++m) {
      out[m] = std::polar(1.0, phase(my, mz));
    }
  }
  return out;
}

}  // namespace

SteeringVector steering_fresnel(const ArrayGeometry& geom, double u, double v, double r) {
  if (!(r > 0.0)) throw DomainError("range must be positive");
  const double k = geom.wavenumber();
  const double d = geom.spacing();
  auto entries = fill_unit_modulus(geom, [&](int my, int mz) {
    return -k * (linear_path_term(my, mz, u, v, d) + quadratic_path_term(my, mz, u, v, r, d));
  });
  return {std::move(entries), ChannelModel::fresnel};
}

SteeringVector steering_fresnel(const ArrayGeometry& geom, const SourceTruth& src) {
  src.validate();
  return steering_fresnel(geom, src.u, src.v, src.r);
}

SteeringVector steering_exact(const ArrayGeometry& geom, double u, double v, double r) {
  if (!(r > 0.0)) throw DomainError("range must be positive");
  const double k = geom.wavenumber();
  const double d = geom.spacing();
  auto entries = fill_unit_modulus(geom, [&](int my, int mz) {
    // r_m - r written without cancellation.
    const double p = linear_path_term(my, mz, u, v, d);
    const double rho = static_cast<double>(mz) * mz + static_cast<double>(my) * my;
    const double num = 2.0 * r * p + d * d * rho;
    const double rm = std::sqrt(r * r + num);
    return -k * num / (rm + r);
  });
  return {std::move(entries), ChannelModel::exact};
}

SteeringVector steering_exact(const ArrayGeometry& geom, const SourceTruth& src) {
  src.validate();
  return steering_exact(geom, src.u, src.v, src.r);
}

SteeringVector steering(const ArrayGeometry& geom, const SourceTruth& src, ChannelModel model) {
  return model == ChannelModel::exact ? steering_exact(geom, src) : steering_fresnel(geom, src);
}

CVector synthesize_channel(const ArrayGeometry& geom, const SourceTruth& src, ChannelModel model) {
  return src.beta * steering(geom, src, model).entries;
}

}  // namespace nearfield
