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

#include "nearfield_oracles/oracles.hpp"

#include <cmath>
#include <limits>

namespace nearfield::oracle {

CMatrix naive_dft2(const CMatrix& x) {
  const auto ny = x.rows();
  const auto nz = x.cols();
  CMatrix out(ny, nz);
  for (Eigen::Index iy = 0; iy < ny; ++iy) {
    for (Eigen::Index iz = 0; iz < nz; ++iz) {
      Complex acc{0.0, 0.0};
      for (Eigen::Index a = 0; a < ny; ++a) {
        for (Eigen::Index b = 0; b < nz; ++b) {
          const double phase = -kTwoPi * (static_cast<double>(a * iy) / ny +
                                          static_cast<double>(b * iz) / nz);
          acc += x(a, b) * std::polar(1.0, phase);
        }
      }
      out(iy, iz) = acc / static_cast<double>(ny * nz);
    }
  }
  return out;
}

double distance_3d(int m_y, int m_z, double u, double v, double r, double spacing) {
  const double w = std::sqrt(std::max(0.0, 1.0 - u * u - v * v));
  const double ux[3] = {r * w, r * v, r * u};
  const double ant[3] = {0.0, m_y * spacing, -m_z * spacing};
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) acc += (ux[i] - ant[i]) * (ux[i] - ant[i]);
  return std::sqrt(acc);
}

CVector true_t(const ArrayGeometry& geom, double u, double v, double r) {
  CVector t(static_cast<Eigen::Index>(geom.element_count()));
  const double d = geom.spacing();
  for (std::size_t m = 0; m < geom.element_count(); ++m) {
    const int my = static_cast<int>(m % static_cast<std::size_t>(geom.m_y_count())) - geom.half_y();
    const int mz = static_cast<int>(m / static_cast<std::size_t>(geom.m_y_count())) - geom.half_z();
    const double cross = mz * u - my * v;
    const double phase = -kPi * d * d / (geom.wavelength() * r) *
                         (static_cast<double>(mz * mz + my * my) - cross * cross);
    t[static_cast<Eigen::Index>(m)] = std::polar(1.0, phase);
  }
  return t;
}

CMatrix anti_diagonal_closed_form(const ArrayGeometry& geom, double u, double v, double gain_power) {
  CMatrix out(geom.m_y_count(), geom.m_z_count());
  for (int a = 0; a < geom.m_y_count(); ++a) {
    for (int b = 0; b < geom.m_z_count(); ++b) {
      const int my = a - geom.half_y();
      const int mz = b - geom.half_z();
      const double phase = -4.0 * kPi / geom.wavelength() * (mz * u - my * v) * geom.spacing();
      out(a, b) = gain_power * std::polar(1.0, phase);
    }
  }
  return out;
}

double max_fresnel_phase_error(const ArrayGeometry& geom, double u, double v, double r) {
  const double k = kTwoPi / geom.wavelength();
  const double d = geom.spacing();
  double worst = 0.0;
  for (int mz = -geom.half_z(); mz <= geom.half_z(); ++mz) {
    for (int my = -geom.half_y(); my <= geom.half_y(); ++my) {
      const double exact = distance_3d(my, mz, u, v, r, d) - r;
      const double lin = (mz * u - my * v) * d;
      const double quad = d * d / (2.0 * r) * (mz * mz + my * my - lin * lin / (d * d));
      worst = std::max(worst, std::abs(wrap_phase(k * (exact - lin - quad))));
    }
  }
  return worst;
}

MusicEstimate brute_force_music(const CVector& h, const GridSpec& grid, const ArrayGeometry& geom) {
  MusicEstimate best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int iu = 0; iu < grid.u.points; ++iu) {
    for (int iv = 0; iv < grid.v.points; ++iv) {
      for (int ir = 0; ir < grid.r.points; ++ir) {
        const double obj = music3d_objective(h, grid.u_at(iu), grid.v_at(iv), grid.r_at(ir), geom);
        if (obj < best.objective) {
          best.objective = obj;
          best.index = {iu, iv, ir};
        }
      }
    }
  }
  best.u = grid.u_at(best.index[0]);
  best.v = grid.v_at(best.index[1]);
  best.r = grid.r_at(best.index[2]);
  return best;
}

}  // namespace nearfield::oracle
