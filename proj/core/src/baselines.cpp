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

#include "nearfield/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace nearfield {

void GridSpec::validate() const {
  for (const GridAxis* axis : {&u, &v, &r}) {
    if (axis->points < 2) throw DomainError("grid axes need at least 2 points");
    if (!(axis->max > axis->min)) throw DomainError("grid axis range is empty");
  }
  if (!(r.min > 0.0)) throw DomainError("range grid must be strictly positive");
}

std::size_t GridSpec::size() const {
  return static_cast<std::size_t>(u.points) * static_cast<std::size_t>(v.points) *
         static_cast<std::size_t>(r.points);
}

double GridSpec::u_at(int i) const { return u.min + i * u.step(); }
double GridSpec::v_at(int i) const { return v.min + i * v.step(); }

double GridSpec::r_at(int i) const {
  if (r_log_spaced) {
    const double t = static_cast<double>(i) / (r.points - 1);
    return r.min * std::pow(r.max / r.min, t);
  }
  return r.min + i * r.step();
}

double music3d_objective(const CVector& h, double u, double v, double r,
                         const ArrayGeometry& geom) {
  const double energy = h.squaredNorm();
  if (!(energy > 0.0)) throw DegenerateInputError("channel estimate has zero norm");
  const CVector b = steering_fresnel(geom, u, v, r).entries;
  const double value = b.squaredNorm() - std::norm(b.dot(h)) / energy;
  return std::max(0.0, value);
}

MusicEstimate music3d_search(const CVector& h, const GridSpec& grid, const ArrayGeometry& geom) {
  return music3d_search(std::span<const CVector>(&h, 1), grid, geom).front();
}

std::vector<MusicEstimate> music3d_search(std::span<const CVector> channels,
                                          const GridSpec& grid, const ArrayGeometry& geom) {
  grid.validate();
  if (geom.element_count() > kDenseElementLimit) {
    throw SizeError("3D MUSIC search limited to " + std::to_string(kDenseElementLimit) +
                    " elements");
  }
  if (grid.size() > kMaxGridPoints) {
    throw SizeError("3D MUSIC grid exceeds " + std::to_string(kMaxGridPoints) + " points");
  }
  const auto m_total = static_cast<Eigen::Index>(geom.element_count());
  const auto count = static_cast<Eigen::Index>(channels.size());
  CMatrix normalized(m_total, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const CVector& h = channels[static_cast<std::size_t>(k)];
    if (h.size() != m_total) throw DomainError("channel length does not match the array");
    const double norm = h.norm();
    if (!(norm > 0.0)) throw DegenerateInputError("channel estimate has zero norm");
    normalized.col(k) = h / norm;
  }

  const double k_wave = geom.wavenumber();
  const double d = geom.spacing();
  const double du = grid.u.step();
  const double u0 = grid.u.min;
  const double m_norm = static_cast<double>(m_total);
  const int nu = grid.u.points;

  std::vector<int> mys(static_cast<std::size_t>(m_total));
  std::vector<int> mzs(static_cast<std::size_t>(m_total));
  for (Eigen::Index m = 0; m < m_total; ++m) {
    const AntennaCoords c = antenna_coords(static_cast<std::size_t>(m), geom);
    mys[static_cast<std::size_t>(m)] = c.m_y;
    mzs[static_cast<std::size_t>(m)] = c.m_z;
  }

  std::vector<MusicEstimate> best(channels.size());
  for (auto& b : best) b.objective = std::numeric_limits<double>::infinity();
  const double tie = 1e-12 * m_norm;

  // conj(b_m) along a u-row is a quadratic-phase chirp, advanced by two
  // complex multiplies per step.
  CMatrix conj_rows(nu, m_total);
  std::vector<Complex> phasor(static_cast<std::size_t>(m_total));
  std::vector<Complex> delta(static_cast<std::size_t>(m_total));
  std::vector<Complex> accel(static_cast<std::size_t>(m_total));

  for (int ir = 0; ir < grid.r.points; ++ir) {
    const double c = d * d / (2.0 * grid.r_at(ir));
    for (int iv = 0; iv < grid.v.points; ++iv) {
      const double v = grid.v_at(iv);
      for (std::size_t m = 0; m < phasor.size(); ++m) {
        const double my = mys[m];
        const double mz = mzs[m];
        const double rho = my * my + mz * mz;
        const double w0 = mz * u0 - my * v;
        const double a = k_wave * (d * w0 + c * rho - c * w0 * w0);
        const double b = k_wave * (d * mz * du - 2.0 * c * w0 * mz * du);
        const double q = -k_wave * c * mz * mz * du * du;
        phasor[m] = std::polar(1.0, a);
        delta[m] = std::polar(1.0, b + q);
        accel[m] = std::polar(1.0, 2.0 * q);
      }
      for (int iu = 0; iu < nu; ++iu) {
        for (std::size_t m = 0; m < phasor.size(); ++m) {
          conj_rows(iu, static_cast<Eigen::Index>(m)) = phasor[m];
          phasor[m] *= delta[m];
          delta[m] *= accel[m];
        }
      }
      const CMatrix projections = conj_rows * normalized;
      for (Eigen::Index k = 0; k < count; ++k) {
        MusicEstimate& cur = best[static_cast<std::size_t>(k)];
        for (int iu = 0; iu < nu; ++iu) {
          const double obj = std::max(0.0, m_norm - std::norm(projections(iu, k)));
          const std::array<int, 3> idx{iu, iv, ir};
          const bool better = obj < cur.objective - tie;
          const bool tied_earlier = !better && obj <= cur.objective + tie && idx < cur.index;
          if (better || tied_earlier) {
            cur.objective = obj;
            cur.index = idx;
          }
        }
      }
    }
  }
  for (auto& b : best) {
    b.u = grid.u_at(b.index[0]);
    b.v = grid.v_at(b.index[1]);
    b.r = grid.r_at(b.index[2]);
  }
  return best;
}

DistanceGridResult oracle_distance_grid(const CVector& t_hat, const RVector& f, double r_min,
                                        double r_max, double step) {
  if (!(r_min > 0.0) || !(r_max >= r_min) || !(step > 0.0)) {
    throw DomainError("distance grid must be positive and non-empty");
  }
  if (t_hat.size() != f.size()) throw DomainError("t_hat and f must have equal length");
  RVector phases(t_hat.size());
  for (Eigen::Index m = 0; m < t_hat.size(); ++m) phases[m] = std::arg(t_hat[m]);

  DistanceGridResult best{r_min, std::numeric_limits<double>::infinity()};
  RVector residual(t_hat.size());
  const auto steps = static_cast<long long>(std::floor((r_max - r_min) / step + 1e-9));
  for (long long i = 0; i <= steps; ++i) {
    const double r = r_min + static_cast<double>(i) * step;
    for (Eigen::Index m = 0; m < residual.size(); ++m) {
      residual[m] = wrap_phase(phases[m] - f[m] / r);
    }
    const double offset = residual.mean();
    double obj = 0.0;
    for (Eigen::Index m = 0; m < residual.size(); ++m) {
      const double e = wrap_phase(residual[m] - offset);
      obj += e * e;
    }
    if (obj < best.objective) best = {r, obj};
  }
  return best;
}

}  // namespace nearfield
