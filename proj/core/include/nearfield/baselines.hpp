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
#include <cstddef>
#include <span>
#include <vector>

#include "nearfield/array_model.hpp"
#include "nearfield/common.hpp"

namespace nearfield {

struct GridAxis {
  int points = 2;
  double min = 0.0;
  double max = 1.0;

  double step() const { return (max - min) / (points - 1); }
};

/// Search grid of the 3D MUSIC baseline. Range points may be log-spaced.
struct GridSpec {
  GridAxis u{201, -1.0, 1.0};
  GridAxis v{201, -1.0, 1.0};
  GridAxis r{191, 3.0, 22.0};
  bool r_log_spaced = false;

  void validate() const;
  std::size_t size() const;
  double u_at(int i) const;
  double v_at(int i) const;
  double r_at(int i) const;
};

inline constexpr std::size_t kMaxGridPoints = 10'000'000;

/// b^H U_n U_n^H b with U_n U_n^H = I - h h^H / ||h||^2:
/// ||b||^2 - |b^H h|^2 / ||h||^2, evaluated in O(M).
double music3d_objective(const CVector& h, double u, double v, double r,
                         const ArrayGeometry& geom);

struct MusicEstimate {
  double u = 0.0;
  double v = 0.0;
  double r = 0.0;
  std::array<int, 3> index{0, 0, 0};  // (u, v, r) grid indices
  double objective = 0.0;
};

/// Exhaustive argmin of music3d_objective over the grid. Exact ties go to the
/// lexicographically smallest (u, v, r) index.
MusicEstimate music3d_search(const CVector& h, const GridSpec& grid, const ArrayGeometry& geom);

/// Same search for several channel estimates sharing one sweep over the grid.
std::vector<MusicEstimate> music3d_search(std::span<const CVector> channels,
                                          const GridSpec& grid, const ArrayGeometry& geom);

struct DistanceGridResult {
  double r_hat = 0.0;
  double objective = 0.0;
};

/// Brute-force distance oracle over r = r_min, r_min + step, ..., r_max:
/// minimizes sum_m wrap(angle(t_m) - f_m / r - c)^2 where the common phase c is
/// the mean wrapped residual at that r.
DistanceGridResult oracle_distance_grid(const CVector& t_hat, const RVector& f, double r_min,
                                        double r_max, double step);

}  // namespace nearfield
