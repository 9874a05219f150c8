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

#include "nearfield/array_model.hpp"
#include "nearfield/common.hpp"

namespace nearfield {

/// Mirror products R_a[a, b] = h[m] * conj(h[M - 1 - m]), an M_Y x M_Z matrix
/// that depends only on the angles for a Fresnel channel.
struct AntiDiagonalMatrix {
  CMatrix values;
};

AntiDiagonalMatrix build_anti_diagonal(const CVector& h, const ArrayGeometry& geom);

/// G[i_y, i_z] = 1/(M_Y M_Z) sum_a sum_b X[a, b] exp(-j 2 pi (a i_y / M_Y + b i_z / M_Z)).
/// Unsigned output indices; see signed_bin().
CMatrix dft2(const CMatrix& x);

/// Maps a DFT index in [0, n) to the signed range [-(n/2), n/2].
int signed_bin(int index, int n);
/// Inverse of signed_bin().
int unsigned_bin(int signed_index, int n);

struct SpectralPeak {
  int iy = 0;
  int iz = 0;
  friend bool operator==(const SpectralPeak&, const SpectralPeak&) = default;
};

/// Max-modulus bin over signed indices; near-ties (1e-12) go to the
/// lexicographically smallest (i_y, i_z).
SpectralPeak find_peak(const CMatrix& spectrum);

struct AnglePair {
  double u = 0.0;
  double v = 0.0;
};

/// Coarse angles from the DFT peak: u = -lambda i_z / (2 d M_Z), v = lambda i_y / (2 d M_Y).
AnglePair initial_angles(const SpectralPeak& peak, const ArrayGeometry& geom);

/// Half-widths of the rotation search, lambda pi / (d M_Z) and lambda pi / (d M_Y).
double max_rotation_u(const ArrayGeometry& geom);
double max_rotation_v(const ArrayGeometry& geom);

/// DFT bin (i_y, i_z) of R_a after phase ramps exp(j a dv) and exp(j b du).
/// O(M_Y M_Z) per call.
Complex rotated_value(const CMatrix& ra, const SpectralPeak& peak, double du, double dv);

/// Refinement factors. Each search axis has G points per DFT bin.
struct RotationGrid {
  int g_y = 64;
  int g_z = 64;
};

/// Uniform offsets covering [-max, max], symmetric and containing 0, with
/// step no larger than one DFT bin divided by the refinement factor.
RVector rotation_axis(double max_offset, double bin_width, int refinement);

struct RefinedAngles {
  double u = 0.0;
  double v = 0.0;
  double du = 0.0;
  double dv = 0.0;
  int axis_points_y = 0;
  int axis_points_z = 0;
  std::size_t evaluations = 0;
};

/// Grid maximization of |rotated_value| followed by
/// u = (lambda / 2d)(du / 2 pi - i_z / M_Z), v = (lambda / 2d)(i_y / M_Y - dv / 2 pi).
RefinedAngles refine_angles(const CMatrix& ra, const SpectralPeak& peak,
                            const ArrayGeometry& geom, const RotationGrid& grid = {});

struct AngleSpectrum {
  CMatrix dft_grid;
  SpectralPeak peak;
  AnglePair initial;
  RefinedAngles refined;
  int grid_gy = 0;
  int grid_gz = 0;
};

/// Anti-diagonal extraction, 2D DFT, peak search and rotation refinement.
AngleSpectrum estimate_angles(const CVector& h, const ArrayGeometry& geom,
                              const RotationGrid& grid = {});

}  // namespace nearfield
