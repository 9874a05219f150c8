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

#include "nearfield/angle_estimator.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace nearfield {

AntiDiagonalMatrix build_anti_diagonal(const CVector& h, const ArrayGeometry& geom) {
  const auto m_total = static_cast<Eigen::Index>(geom.element_count());
  if (h.size() != m_total) throw DomainError("channel length does not match the array");
  AntiDiagonalMatrix out;
  out.values.resize(geom.m_y_count(), geom.m_z_count());
  // Linear index m = a + M_Y b, so the mirror element is simply M - 1 - m.
  for (int b = 0; b < geom.m_z_count(); ++b) {
    for (int a = 0; a < geom.m_y_count(); ++a) {
      const Eigen::Index m = a + static_cast<Eigen::Index>(geom.m_y_count()) * b;
      out.values(a, b) = h[m] * std::conj(h[m_total - 1 - m]);
    }
  }
  return out;
}

namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// The FFTW planner is not re-entrant; execution of an existing plan on new
// arrays is. Plans are cached per shape for the lifetime of the process.
class PlanCache {
 public:
  fftw_plan forward(int rows, int cols) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find({rows, cols});
    if (it != plans_.end()) return it->second;
    FftwBuffer in(static_cast<std::size_t>(rows) * cols);
    FftwBuffer out(static_cast<std::size_t>(rows) * cols);
    // Eigen storage is column-major: viewed as row-major it is the transpose,
    // and the 2D DFT commutes with transposition.
    fftw_plan plan = fftw_plan_dft_2d(cols, rows, in.data, out.data, FFTW_FORWARD, FFTW_ESTIMATE);
    plans_.emplace(std::make_pair(rows, cols), plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

CMatrix dft2(const CMatrix& x) {
  const int rows = static_cast<int>(x.rows());
  const int cols = static_cast<int>(x.cols());
  if (rows == 0 || cols == 0) return CMatrix(rows, cols);
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  fftw_plan plan = plan_cache().forward(rows, cols);
  FftwBuffer in(n);
  FftwBuffer out(n);
  const Complex* src = x.data();
  for (std::size_t i = 0; i < n; ++i) {
    in.data[i][0] = src[i].real();
    in.data[i][1] = src[i].imag();
  }
  fftw_execute_dft(plan, in.data, out.data);
  CMatrix result(rows, cols);
  const double scale = 1.0 / static_cast<double>(n);
  Complex* dst = result.data();
  for (std::size_t i = 0; i < n; ++i) dst[i] = Complex(out.data[i][0], out.data[i][1]) * scale;
  return result;
}

int signed_bin(int index, int n) { return index > n / 2 ? index - n : index; }

int unsigned_bin(int signed_index, int n) {
  return signed_index < 0 ? signed_index + n : signed_index;
}

SpectralPeak find_peak(const CMatrix& spectrum) {
  const int ny = static_cast<int>(spectrum.rows());
  const int nz = static_cast<int>(spectrum.cols());
  if (ny == 0 || nz == 0) throw DomainError("empty spectrum");
  constexpr double kTie = 1e-12;
  SpectralPeak best{};
  double best_mag = -1.0;
  // Visiting in signed lexicographic order means a later bin must win by more
  // than the tie tolerance.
  for (int iy = -(ny - 1) / 2; iy <= ny / 2; ++iy) {
    for (int iz = -(nz - 1) / 2; iz <= nz / 2; ++iz) {
      const double mag = std::abs(spectrum(unsigned_bin(iy, ny), unsigned_bin(iz, nz)));
      if (mag > best_mag + kTie) {
        best_mag = mag;
        best = {iy, iz};
      }
    }
  }
  return best;
}

AnglePair initial_angles(const SpectralPeak& peak, const ArrayGeometry& geom) {
  const double scale = geom.wavelength() / (2.0 * geom.spacing());
  return {-scale * peak.iz / geom.m_z_count(), scale * peak.iy / geom.m_y_count()};
}

double max_rotation_u(const ArrayGeometry& geom) {
  return geom.wavelength() * kPi / (geom.spacing() * geom.m_z_count());
}

double max_rotation_v(const ArrayGeometry& geom) {
  return geom.wavelength() * kPi / (geom.spacing() * geom.m_y_count());
}

Complex rotated_value(const CMatrix& ra, const SpectralPeak& peak, double du, double dv) {
  const Eigen::Index ny = ra.rows();
  const Eigen::Index nz = ra.cols();
  const double wy = dv - kTwoPi * peak.iy / static_cast<double>(ny);
  const double wz = du - kTwoPi * peak.iz / static_cast<double>(nz);
  Complex acc{0.0, 0.0};
  for (Eigen::Index b = 0; b < nz; ++b) {
    Complex col{0.0, 0.0};
    for (Eigen::Index a = 0; a < ny; ++a) col += ra(a, b) * std::polar(1.0, a * wy);
    acc += col * std::polar(1.0, b * wz);
  }
  return acc / static_cast<double>(ny * nz);
}

RVector rotation_axis(double max_offset, double bin_width, int refinement) {
  if (refinement < 2) throw DomainError("rotation refinement factor must be at least 2");
  if (!(max_offset >= 0.0) || !(bin_width > 0.0)) throw DomainError("invalid rotation range");
  const double half_bins = max_offset / bin_width;
  const int per_side = std::max(1, static_cast<int>(std::ceil(half_bins * refinement - 1e-9)));
  const double step = max_offset / per_side;
  RVector axis(2 * per_side + 1);
  for (int i = -per_side; i <= per_side; ++i) axis[i + per_side] = i * step;
  return axis;
}

namespace {

// exp(j * index * (offset - 2 pi bin / n)) for every offset on the axis.
CMatrix ramp_matrix(Eigen::Index n, int bin, const RVector& offsets) {
  CMatrix e(n, offsets.size());
  for (Eigen::Index k = 0; k < offsets.size(); ++k) {
    const double w = offsets[k] - kTwoPi * bin / static_cast<double>(n);
    for (Eigen::Index i = 0; i < n; ++i) e(i, k) = std::polar(1.0, i * w);
  }
  return e;
}

}  // namespace

RefinedAngles refine_angles(const CMatrix& ra, const SpectralPeak& peak,
                            const ArrayGeometry& geom, const RotationGrid& grid) {
  if (ra.rows() != geom.m_y_count() || ra.cols() != geom.m_z_count()) {
    throw DomainError("anti-diagonal matrix does not match the array");
  }
  const RVector du_axis =
      rotation_axis(max_rotation_u(geom), kTwoPi / geom.m_z_count(), grid.g_z);
  const RVector dv_axis =
      rotation_axis(max_rotation_v(geom), kTwoPi / geom.m_y_count(), grid.g_y);

  // Same sum as rotated_value() at every grid node, factored as
  // Ev^T * R_a * Eu so the whole grid costs O(M N_u + M_Y N_u N_v).
  const CMatrix eu = ramp_matrix(ra.cols(), peak.iz, du_axis);
  const CMatrix ev = ramp_matrix(ra.rows(), peak.iy, dv_axis);
  const CMatrix partial = ra * eu;
  const CMatrix values = ev.transpose() * partial;
  const double norm = 1.0 / static_cast<double>(ra.size());

  const Eigen::Index cy = dv_axis.size() / 2;
  const Eigen::Index cz = du_axis.size() / 2;
  constexpr double kTie = 1e-12;
  Eigen::Index best_l = cy;
  Eigen::Index best_k = cz;
  double best_mag = std::abs(values(cy, cz)) * norm;
  auto radius = [&](Eigen::Index l, Eigen::Index k) {
    return (l - cy) * (l - cy) + (k - cz) * (k - cz);
  };
  for (Eigen::Index l = 0; l < values.rows(); ++l) {
    for (Eigen::Index k = 0; k < values.cols(); ++k) {
      const double mag = std::abs(values(l, k)) * norm;
      if (mag > best_mag + kTie * std::max(1.0, best_mag)) {
        best_mag = mag;
        best_l = l;
        best_k = k;
      } else if (mag >= best_mag - kTie * std::max(1.0, best_mag)) {
        const auto r_new = radius(l, k);
        const auto r_best = radius(best_l, best_k);
        if (r_new < r_best || (r_new == r_best && std::pair(l, k) < std::pair(best_l, best_k))) {
          best_l = l;
          best_k = k;
          best_mag = std::max(best_mag, mag);
        }
      }
    }
  }

  RefinedAngles out;
  out.du = du_axis[best_k];
  out.dv = dv_axis[best_l];
  const double scale = geom.wavelength() / (2.0 * geom.spacing());
  out.u = scale * (out.du / kTwoPi - static_cast<double>(peak.iz) / geom.m_z_count());
  out.v = scale * (static_cast<double>(peak.iy) / geom.m_y_count() - out.dv / kTwoPi);
  out.axis_points_y = static_cast<int>(dv_axis.size());
  out.axis_points_z = static_cast<int>(du_axis.size());
  out.evaluations = static_cast<std::size_t>(values.size());
  return out;
}

AngleSpectrum estimate_angles(const CVector& h, const ArrayGeometry& geom,
                              const RotationGrid& grid) {
  const AntiDiagonalMatrix ra = build_anti_diagonal(h, geom);
  AngleSpectrum out;
  out.dft_grid = dft2(ra.values);
  out.peak = find_peak(out.dft_grid);
  out.initial = initial_angles(out.peak, geom);
  out.refined = refine_angles(ra.values, out.peak, geom, grid);
  out.grid_gy = grid.g_y;
  out.grid_gz = grid.g_z;
  return out;
}

}  // namespace nearfield
