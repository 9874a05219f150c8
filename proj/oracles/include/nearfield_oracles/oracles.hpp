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

#include <nearfield/array_model.hpp>
#include <nearfield/baselines.hpp>
#include <nearfield/common.hpp>

namespace nearfield::oracle {

/// Direct O((M_Y M_Z)^2) double sum with 1/(M_Y M_Z) normalization.
CMatrix naive_dft2(const CMatrix& x);

/// Euclidean distance between the user at r (sqrt(1 - u^2 - v^2), v, u) and the
/// element at (0, m_y d, -m_z d), from explicit 3D coordinates.
double distance_3d(int m_y, int m_z, double u, double v, double r, double spacing);

/// Distance-dependent factor t_m = exp(-j (pi d^2 / (lambda r)) (m_z^2 + m_y^2 - (m_z u - m_y v)^2)).
CVector true_t(const ArrayGeometry& geom, double u, double v, double r);

/// Closed-form mirror products |beta|^2 exp(-j (4 pi / lambda)(m_z u - m_y v) d).
CMatrix anti_diagonal_closed_form(const ArrayGeometry& geom, double u, double v, double gain_power);

/// Max |phase(fresnel) - phase(exact)| over the array, each phase built from
/// 3D distances rather than the library's steering routines.
double max_fresnel_phase_error(const ArrayGeometry& geom, double u, double v, double r);

/// Exhaustive argmin of music3d_objective() evaluated point by point.
MusicEstimate brute_force_music(const CVector& h, const GridSpec& grid, const ArrayGeometry& geom);

}  // namespace nearfield::oracle
