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

#include "nearfield/experiment_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "nearfield/distance_estimator.hpp"

namespace nearfield {

using nlohmann::json;

const char* to_string(Method method) {
  switch (method) {
    case Method::sadce: return "sadce";
    case Method::ls: return "ls";
    case Method::music3d: return "music3d";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "sadce") return Method::sadce;
  if (name == "ls") return Method::ls;
  if (name == "music3d") return Method::music3d;
  throw ConfigError("unknown method '" + name + "' (expected sadce|ls|music3d)");
}

Point3 UserRegion::centroid() const {
  return {(min[0] + max[0]) / 2.0, (min[1] + max[1]) / 2.0, (min[2] + max[2]) / 2.0};
}

ArrayGeometry ExperimentConfig::array() const {
  return ArrayGeometry(geometry.m_y_count, geometry.m_z_count, geometry.wavelength,
                       geometry.spacing);
}

bool ExperimentConfig::has_method(Method m) const {
  return std::find(methods.begin(), methods.end(), m) != methods.end();
}

namespace {

double dot(const Point3& a, const Point3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Point3 sub(const Point3& a, const Point3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Point3 scale(const Point3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

Point3 cross(const Point3& a, const Point3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Point3 normalized(const Point3& a) {
  const double n = std::sqrt(dot(a, a));
  if (!(n > 0.0)) throw ConfigError("cannot normalize a zero vector");
  return scale(a, 1.0 / n);
}

}  // namespace

std::array<Point3, 3> array_frame(const Point3& bs_position, const Point3& target) {
  const Point3 normal = normalized(sub(target, bs_position));
  // Array Z axis is the projection of scene +y; fall back to +x when looking along y.
  Point3 up{0.0, 1.0, 0.0};
  if (std::abs(dot(up, normal)) > 0.99) up = {1.0, 0.0, 0.0};
  const Point3 z_axis = normalized(sub(up, scale(normal, dot(up, normal))));
  const Point3 y_axis = cross(z_axis, normal);
  return {normal, y_axis, z_axis};
}

SourceTruth source_from_position(const Point3& position, const Point3& bs_position,
                                 const std::array<Point3, 3>& frame) {
  const Point3 rel = sub(position, bs_position);
  const double r = std::sqrt(dot(rel, rel));
  if (!(r > 0.0)) throw ConfigError("user coincides with the base station");
  SourceTruth s;
  s.r = r;
  s.v = dot(rel, frame[1]) / r;
  s.u = dot(rel, frame[2]) / r;
  return s;
}

void ExperimentConfig::validate() const {
  ArrayGeometry geom = [&] {
    try {
      return array();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("geometry: ") + e.what());
    }
  }();
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (snr_grid.empty()) throw ConfigError("snr_grid must not be empty");
  for (double s : snr_grid) {
    if (!std::isfinite(s)) throw ConfigError("snr_grid entries must be finite");
  }
  if (pilot_lengths.empty()) throw ConfigError("pilot length grid must not be empty");
  for (int l : pilot_lengths) {
    if (l < 1) throw ConfigError("pilot lengths must be >= 1");
  }
  if (!(pilot_power > 0.0)) throw ConfigError("pilot_power must be positive");
  if (methods.empty()) throw ConfigError("methods must not be empty");
  if (rotation_grid.g_y < 2 || rotation_grid.g_z < 2) {
    throw ConfigError("rotation_grid factors must be >= 2");
  }
  if (!(fresnel_floor_multiple >= 0.0)) throw ConfigError("fresnel_floor_multiple must be >= 0");
  for (int i = 0; i < 3; ++i) {
    if (user_region.min[i] > user_region.max[i]) {
      throw ConfigError("user_region min must not exceed max");
    }
  }
  if (has_method(Method::music3d)) {
    if (geom.element_count() > kDenseElementLimit) {
      throw ConfigError("music3d is limited to arrays of at most " +
                        std::to_string(kDenseElementLimit) + " elements");
    }
    try {
      music_grid.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("music_grid: ") + e.what());
    }
    if (music_grid.size() > kMaxGridPoints) throw ConfigError("music_grid too large");
  }

  // The whole box must sit in front of the array, beyond the Fresnel floor,
  // and close enough to the boresight that no curvature phase wraps.
  const auto frame = array_frame(bs_position, user_region.centroid());
  Point3 closest{};
  for (int i = 0; i < 3; ++i) {
    closest[i] = std::clamp(bs_position[i], user_region.min[i], user_region.max[i]);
  }
  const Point3 gap = sub(closest, bs_position);
  const double min_range = std::sqrt(dot(gap, gap));
  const double floor = fresnel_floor(geom, fresnel_floor_multiple);
  if (min_range < floor) {
    throw ConfigError("user_region comes within " + std::to_string(min_range) +
                      " m of the base station, below the Fresnel floor of " +
                      std::to_string(floor) + " m");
  }
  if (!(max_curvature_phase(geom, min_range) < kPi)) {
    throw ConfigError("user_region is close enough for curvature phases to wrap");
  }
  for (int corner = 0; corner < 8; ++corner) {
    const Point3 p{(corner & 1) ? user_region.max[0] : user_region.min[0],
                   (corner & 2) ? user_region.max[1] : user_region.min[1],
                   (corner & 4) ? user_region.max[2] : user_region.min[2]};
    if (!(dot(sub(p, bs_position), frame[0]) > 0.0)) {
      throw ConfigError("user_region extends behind the array plane");
    }
  }
}

namespace {

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

Point3 read_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(where + " must be [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

GridAxis read_axis(const json& j, const std::string& where) {
  require_keys(j, where, {"points", "min", "max"});
  GridAxis axis;
  axis.points = j.at("points").get<int>();
  axis.min = j.at("min").get<double>();
  axis.max = j.at("max").get<double>();
  return axis;
}

json write_axis(const GridAxis& a) { return {{"points", a.points}, {"min", a.min}, {"max", a.max}}; }

ExperimentConfig from_json(const json& root) {
  require_keys(root, "config",
               {"description", "geometry", "user_region", "bs_position", "snr_grid",
                "pilot_length", "pilot_length_grid", "pilot_kind", "pilot_power", "trials",
                "rng_seed", "synthesis_model", "methods", "rotation_grid",
                "fresnel_floor_multiple", "music_grid", "record_runtime"});
  ExperimentConfig c;
  if (root.contains("description")) c.description = root.at("description").get<std::string>();
  if (root.contains("geometry")) {
    const json& g = root.at("geometry");
    require_keys(g, "geometry", {"m_y_count", "m_z_count", "spacing", "wavelength"});
    if (g.contains("m_y_count")) c.geometry.m_y_count = g.at("m_y_count").get<int>();
    if (g.contains("m_z_count")) c.geometry.m_z_count = g.at("m_z_count").get<int>();
    if (g.contains("wavelength")) c.geometry.wavelength = g.at("wavelength").get<double>();
    if (g.contains("spacing")) c.geometry.spacing = g.at("spacing").get<double>();
  }
  if (root.contains("user_region")) {
    const json& r = root.at("user_region");
    require_keys(r, "user_region", {"min", "max"});
    c.user_region.min = read_point(r.at("min"), "user_region.min");
    c.user_region.max = read_point(r.at("max"), "user_region.max");
  }
  if (root.contains("bs_position")) c.bs_position = read_point(root.at("bs_position"), "bs_position");
  if (root.contains("snr_grid")) c.snr_grid = root.at("snr_grid").get<std::vector<double>>();
  if (root.contains("pilot_length") && root.contains("pilot_length_grid")) {
    throw ConfigError("give either pilot_length or pilot_length_grid, not both");
  }
  if (root.contains("pilot_length")) c.pilot_lengths = {root.at("pilot_length").get<int>()};
  if (root.contains("pilot_length_grid")) {
    c.pilot_lengths = root.at("pilot_length_grid").get<std::vector<int>>();
  }
  if (root.contains("pilot_kind")) c.pilot_kind = parse_pilot_kind(root.at("pilot_kind").get<std::string>());
  if (root.contains("pilot_power")) c.pilot_power = root.at("pilot_power").get<double>();
  if (root.contains("trials")) c.trials = root.at("trials").get<int>();
  if (root.contains("rng_seed")) c.rng_seed = root.at("rng_seed").get<std::uint64_t>();
  if (root.contains("synthesis_model")) {
    c.synthesis_model = parse_channel_model(root.at("synthesis_model").get<std::string>());
  }
  if (root.contains("methods")) {
    c.methods.clear();
    for (const auto& m : root.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
  }
  if (root.contains("rotation_grid")) {
    const json& g = root.at("rotation_grid");
    require_keys(g, "rotation_grid", {"g_y", "g_z"});
    if (g.contains("g_y")) c.rotation_grid.g_y = g.at("g_y").get<int>();
    if (g.contains("g_z")) c.rotation_grid.g_z = g.at("g_z").get<int>();
  }
  if (root.contains("fresnel_floor_multiple")) {
    c.fresnel_floor_multiple = root.at("fresnel_floor_multiple").get<double>();
  }
  if (root.contains("music_grid")) {
    const json& g = root.at("music_grid");
    require_keys(g, "music_grid", {"u", "v", "r", "r_log_spaced"});
    if (g.contains("u")) c.music_grid.u = read_axis(g.at("u"), "music_grid.u");
    if (g.contains("v")) c.music_grid.v = read_axis(g.at("v"), "music_grid.v");
    if (g.contains("r")) c.music_grid.r = read_axis(g.at("r"), "music_grid.r");
    if (g.contains("r_log_spaced")) c.music_grid.r_log_spaced = g.at("r_log_spaced").get<bool>();
  }
  if (root.contains("record_runtime")) c.record_runtime = root.at("record_runtime").get<bool>();
  return c;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  ExperimentConfig config;
  try {
    config = from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string to_json(const ExperimentConfig& c) {
  json geometry = {{"m_y_count", c.geometry.m_y_count},
                   {"m_z_count", c.geometry.m_z_count},
                   {"wavelength", c.geometry.wavelength}};
  if (c.geometry.spacing) geometry["spacing"] = *c.geometry.spacing;
  json methods = json::array();
  for (Method m : c.methods) methods.push_back(to_string(m));
  json root = {
      {"description", c.description},
      {"geometry", geometry},
      {"user_region", {{"min", c.user_region.min}, {"max", c.user_region.max}}},
      {"bs_position", c.bs_position},
      {"snr_grid", c.snr_grid},
      {"pilot_kind", to_string(c.pilot_kind)},
      {"pilot_power", c.pilot_power},
      {"trials", c.trials},
      {"rng_seed", c.rng_seed},
      {"synthesis_model", to_string(c.synthesis_model)},
      {"methods", methods},
      {"rotation_grid", {{"g_y", c.rotation_grid.g_y}, {"g_z", c.rotation_grid.g_z}}},
      {"fresnel_floor_multiple", c.fresnel_floor_multiple},
      {"music_grid",
       {{"u", write_axis(c.music_grid.u)},
        {"v", write_axis(c.music_grid.v)},
        {"r", write_axis(c.music_grid.r)},
        {"r_log_spaced", c.music_grid.r_log_spaced}}},
      {"record_runtime", c.record_runtime},
  };
  if (c.pilot_lengths.size() == 1) {
    root["pilot_length"] = c.pilot_lengths.front();
  } else {
    root["pilot_length_grid"] = c.pilot_lengths;
  }
  return root.dump(2) + "\n";
}

namespace {

ExperimentConfig preset_base() {
  ExperimentConfig c;
  c.geometry = {41, 41, std::nullopt, 0.03};
  // 5 m x 5 m square facing an access point mounted at (1.3, 0, 6). The
  // boresight points from the AP to the square's centroid.
  c.bs_position = {1.3, 0.0, 6.0};
  c.user_region = {{-1.2, -2.5, 1.0}, {3.8, 2.5, 1.0}};
  c.pilot_kind = PilotKind::all_ones;
  c.pilot_power = 1.0;
  c.trials = 200;
  c.rng_seed = 20240611;
  c.synthesis_model = ChannelModel::fresnel;
  c.methods = {Method::sadce, Method::ls};
  c.rotation_grid = {64, 64};
  return c;
}

}  // namespace

ExperimentConfig paper_fig2_config() {
  ExperimentConfig c = preset_base();
  c.description =
      "RMSE/NMSE versus SNR. 41x41 UPA, 10 GHz, d = lambda/4. AP at (1.3, 0, 6) m; "
      "users uniform in a 5 m x 5 m square 5 m in front of the AP; boresight from the AP "
      "toward the square's centroid.";
  c.snr_grid = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
  c.pilot_lengths = {1};
  return c;
}

ExperimentConfig paper_fig3_config() {
  ExperimentConfig c = preset_base();
  c.description =
      "NMSE versus pilot length at 10 dB SNR. 41x41 UPA, 10 GHz, d = lambda/4. AP at "
      "(1.3, 0, 6) m; users uniform in a 5 m x 5 m square 5 m in front of the AP; boresight "
      "from the AP toward the square's centroid.";
  c.snr_grid = {10.0};
  c.pilot_lengths = {1, 2, 4, 8, 16};
  return c;
}

}  // namespace nearfield
