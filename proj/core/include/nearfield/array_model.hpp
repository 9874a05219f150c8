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

#include <cstddef>
#include <optional>

#include "nearfield/common.hpp"

namespace nearfield {

enum class ChannelModel { exact, fresnel };

const char* to_string(ChannelModel model);
ChannelModel parse_channel_model(const std::string& name);

/// Uniform planar array in the YOZ plane with an odd number of elements on
/// each axis. Element (m_y, m_z) uses signed offsets from the array center.
class ArrayGeometry {
 public:
  /// Spacing defaults to a quarter wavelength.
  ArrayGeometry(int m_y_count, int m_z_count, double wavelength,
                std::optional<double> spacing = std::nullopt);

  int m_y_count() const { return m_y_count_; }
  int m_z_count() const { return m_z_count_; }
  double spacing() const { return spacing_; }
  double wavelength() const { return wavelength_; }
  double wavenumber() const { return kTwoPi / wavelength_; }

  std::size_t element_count() const {
    return static_cast<std::size_t>(m_y_count_) * static_cast<std::size_t>(m_z_count_);
  }
  int half_y() const { return (m_y_count_ - 1) / 2; }
  int half_z() const { return (m_z_count_ - 1) / 2; }
  std::size_t center_index() const { return (element_count() - 1) / 2; }

  /// Largest side length of the array, max(M_Y, M_Z) * d.
  double aperture() const;

  friend bool operator==(const ArrayGeometry&, const ArrayGeometry&) = default;

 private:
  int m_y_count_;
  int m_z_count_;
  double spacing_;
  double wavelength_;
};

struct AntennaCoords {
  int m_y;
  int m_z;
  friend bool operator==(const AntennaCoords&, const AntennaCoords&) = default;
};

/// Linear element index m = M_Y * m_z + m_y + (M - 1) / 2.
std::size_t antenna_index(int m_y, int m_z, const ArrayGeometry& geom);
AntennaCoords antenna_coords(std::size_t m, const ArrayGeometry& geom);

/// Conventional near/far-field boundary 2 D^2 / lambda.
double rayleigh_distance(double aperture, double wavelength);

/// Smallest range for which the second-order wavefront model is trusted.
double fresnel_floor(const ArrayGeometry& geom, double aperture_multiple = 10.0);

/// Ground-truth user parameters. u = sin(theta), v = cos(theta) sin(phi).
struct SourceTruth {
  double u = 0.0;
  double v = 0.0;
  double r = 1.0;
  Complex beta{1.0, 0.0};

  static SourceTruth from_angles(double azimuth, double elevation, double range,
                                 Complex gain = {1.0, 0.0});

  /// Throws DomainError unless u^2 + v^2 <= 1 and r > 0.
  void validate() const;
};

struct SteeringVector {
  CVector entries;
  ChannelModel convention;
};

/// Linear (angle) path-length term p_m = (m_z u - m_y v) d.
double linear_path_term(int m_y, int m_z, double u, double v, double spacing);

/// Quadratic (curvature) path-length term
/// q_m = d^2 / (2r) * (m_z^2 + m_y^2 - (m_z u - m_y v)^2).
double quadratic_path_term(int m_y, int m_z, double u, double v, double r, double spacing);

/// Exact distance from element (m_y, m_z) to a user at range r in direction (u, v).
/// Element placed at (0, m_y d, -m_z d), user at r (w, v, u).
double element_distance(int m_y, int m_z, double u, double v, double r, double spacing);

/// Entries exp(-j k (p_m + q_m)).
SteeringVector steering_fresnel(const ArrayGeometry& geom, double u, double v, double r);
SteeringVector steering_fresnel(const ArrayGeometry& geom, const SourceTruth& src);

/// Entries exp(-j k (r_m - r)).
SteeringVector steering_exact(const ArrayGeometry& geom, double u, double v, double r);
SteeringVector steering_exact(const ArrayGeometry& geom, const SourceTruth& src);

SteeringVector steering(const ArrayGeometry& geom, const SourceTruth& src, ChannelModel model);

/// h = beta * b(u, v, r), no 1/sqrt(M) normalization.
CVector synthesize_channel(const ArrayGeometry& geom, const SourceTruth& src, ChannelModel model);

}  // namespace nearfield
