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

#include "nearfield/angle_estimator.hpp"
#include "nearfield/array_model.hpp"
#include "nearfield/common.hpp"
#include "nearfield/signal_path.hpp"

namespace nearfield {

/// Split of the steering vector b = Q(u, v) t(u, v, r) with Q diagonal.
/// Q is held by its phases only.
struct FocusDecomposition {
  RVector q_phases;      // -k p_m(u, v)
  CVector t_hat;
  std::size_t selector_index = 0;  // (M - 1) / 2
};

/// Phases of the angle-only factor Q(u, v).
RVector focus_phases(const ArrayGeometry& geom, double u, double v);

/// g = Q^H h / ||h||. Throws DegenerateInputError when h is zero.
CVector focused_channel(const CVector& h, const ArrayGeometry& geom, double u, double v);

/// Dense constrained minimizer of t^H T t subject to t[center] = 1, with
/// T = Q^H (I - h h^H / ||h||^2) Q. T is singular for a rank-1 covariance, so
/// the solve uses T + ridge * |g[center]|^2 * I. Limited to kDenseElementLimit
/// elements.
CVector solve_t_dense(const CVector& h, double u, double v, const ArrayGeometry& geom,
                      double ridge = 1e-6);

/// Limit of solve_t_dense() as ridge -> 0: t = g / g[center]. O(M).
/// Throws ConditioningError when |g[center]| <= tolerance * ||g||.
CVector solve_t_analytic(const CVector& h, double u, double v, const ArrayGeometry& geom,
                         double tolerance = 1e-9);

/// [f]_m = -(pi d^2 / lambda)(m_z^2 + m_y^2 - (m_z u - m_y v)^2), so that
/// angle(t_m) = f_m / r.
RVector f_vector(double u, double v, const ArrayGeometry& geom);

struct DistanceFit {
  RVector f_vector;
  RVector a_hat;
  double sigma_r = 0.0;
  double inv_r = 0.0;
  double r_hat = 0.0;
};

/// Affine LS fit angle(t) ~ sigma_r + f / r.
/// DegenerateInputError if f is constant, FitFailure if 1/r <= 0.
DistanceFit fit_distance(const CVector& t_hat, const RVector& f);

/// Largest |f_m| / r over the array; principal-value phases are valid below pi.
double max_curvature_phase(const ArrayGeometry& geom, double r);

/// beta = b^H h_ls / (b^H b) with b the Fresnel steering vector. For all-ones
/// pilots this equals (1/L) sum_l b^H y_l / (b^H b).
Complex estimate_gain(const CVector& h_ls, double u, double v, double r,
                      const ArrayGeometry& geom);
Complex estimate_gain(const ReceivedBlock& block, double u, double v, double r,
                      const ArrayGeometry& geom);

struct EstimateDiagnostics {
  SpectralPeak peak;
  AnglePair initial;
  double du = 0.0;
  double dv = 0.0;
  double sigma_r = 0.0;
  std::size_t rotation_evaluations = 0;
};

struct ChannelEstimate {
  double u_hat = 0.0;
  double v_hat = 0.0;
  double r_hat = 0.0;
  Complex beta_hat{0.0, 0.0};
  CVector h_hat;
  EstimateDiagnostics diagnostics;
};

/// h = beta * b_fresnel(u, v, r).
ChannelEstimate reconstruct(const ArrayGeometry& geom, double u, double v, double r,
                            Complex beta, const EstimateDiagnostics& diagnostics = {});

}  // namespace nearfield
