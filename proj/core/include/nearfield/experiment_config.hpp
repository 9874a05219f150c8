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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nearfield/angle_estimator.hpp"
#include "nearfield/array_model.hpp"
#include "nearfield/baselines.hpp"
#include "nearfield/signal_path.hpp"

namespace nearfield {

enum class Method { sadce, ls, music3d };

const char* to_string(Method method);
Method parse_method(const std::string& name);

using Point3 = std::array<double, 3>;

struct GeometryConfig {
  int m_y_count = 41;
  int m_z_count = 41;
  std::optional<double> spacing;  // defaults to wavelength / 4
  double wavelength = 0.03;

  friend bool operator==(const GeometryConfig&, const GeometryConfig&) = default;
};

/// Axis-aligned box of user positions in scene coordinates (meters).
struct UserRegion {
  Point3 min{0.0, 0.0, 0.0};
  Point3 max{0.0, 0.0, 0.0};

  Point3 centroid() const;
  friend bool operator==(const UserRegion&, const UserRegion&) = default;
};

/// One Monte Carlo experiment. JSON keys mirror the field names.
struct ExperimentConfig {
  std::string description;
  GeometryConfig geometry;
  UserRegion user_region;
  Point3 bs_position{0.0, 0.0, 0.0};
  std::vector<double> snr_grid{10.0};
  std::vector<int> pilot_lengths{1};  // "pilot_length" or "pilot_length_grid"
  PilotKind pilot_kind = PilotKind::all_ones;
  double pilot_power = 1.0;
  int trials = 200;
  std::uint64_t rng_seed = 1;
  ChannelModel synthesis_model = ChannelModel::fresnel;
  std::vector<Method> methods{Method::sadce, Method::ls};
  RotationGrid rotation_grid;
  double fresnel_floor_multiple = 10.0;
  GridSpec music_grid;
  bool record_runtime = true;

  ArrayGeometry array() const;
  bool has_method(Method m) const;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

/// Parses JSON text. Unknown keys are errors.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_json(const ExperimentConfig& config);

/// SNR sweep 0..30 dB, 41x41 array at 10 GHz, 200 trials.
ExperimentConfig paper_fig2_config();
/// Pilot-length sweep 1..16 at 10 dB SNR.
ExperimentConfig paper_fig3_config();

/// Array-frame basis for a BS looking from bs_position toward `target`:
/// rows are (normal, array Y axis, array Z axis).
std::array<Point3, 3> array_frame(const Point3& bs_position, const Point3& target);

/// (u, v, r) of a scene point for the array frame above.
SourceTruth source_from_position(const Point3& position, const Point3& bs_position,
                                 const std::array<Point3, 3>& frame);

}  // namespace nearfield
