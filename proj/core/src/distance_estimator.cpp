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

#include "nearfield/distance_estimator.hpp"

#include <Eigen/LU>

#include <cmath>
#include <string>

namespace nearfield {

RVector focus_phases(const ArrayGeometry& geom, double u, double v) {
  RVector out(static_cast<Eigen::Index>(geom.element_count()));
  const double k = geom.wavenumber();
  Eigen::Index m = 0;
  for (int mz = -geom.half_z(); mz <= geom.half_z(); ++mz) {
    for (int my = -geom.half_y(); my <= geom.half_y(); ++my, ++m) {
      out[m] = -k * linear_path_term(my, mz, u, v, geom.spacing());
    }
  }
  return out;
}

CVector focused_channel(const CVector& h, const ArrayGeometry& geom, double u, double v) {
  if (h.size() != static_cast<Eigen::Index>(geom.element_count())) {
    throw DomainError("channel length does not match the array");
  }
  const double norm = h.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DegenerateInputError("channel estimate has zero norm");
  }
  const RVector phases = focus_phases(geom, u, v);
  CVector g(h.size());
  for (Eigen::Index m = 0; m < h.size(); ++m) g[m] = std::polar(1.0, -phases[m]) * h[m] / norm;
  return g;
}

CVector solve_t_dense(const CVector& h, double u, double v, const ArrayGeometry& geom,
                      double ridge) {
  if (geom.element_count() > kDenseElementLimit) {
    throw SizeError("dense t-solve limited to " + std::to_string(kDenseElementLimit) +
                    " elements; use solve_t_analytic");
  }
  if (!(ridge > 0.0)) throw DomainError("ridge must be positive");
  const CVector g = focused_channel(h, geom, u, v);
  const auto c = static_cast<Eigen::Index>(geom.center_index());
  const double center_energy = std::norm(g[c]);
  if (!(center_energy > 0.0)) throw ConditioningError("phase reference element is zero");
  const Eigen::Index n = g.size();
  CMatrix t_mat = -g * g.adjoint();
  t_mat.diagonal().array() += Complex(1.0 + ridge * center_energy, 0.0);
  CVector rhs = CVector::Zero(n);
  rhs[c] = 1.0;
  const CVector x = t_mat.partialPivLu().solve(rhs);
  return x / x[c];
}

CVector solve_t_analytic(const CVector& h, double u, double v, const ArrayGeometry& geom,
                         double tolerance) {
  const CVector g = focused_channel(h, geom, u, v);
  const auto c = static_cast<Eigen::Index>(geom.center_index());
  if (!(std::abs(g[c]) > tolerance * g.norm())) {
    throw ConditioningError("center element too small to serve as phase reference");
  }
  CVector t = g / g[c];
  t[c] = 1.0;
  return t;
}

RVector f_vector(double u, double v, const ArrayGeometry& geom) {
  RVector out(static_cast<Eigen::Index>(geom.element_count()));
  const double d = geom.spacing();
  const double scale = -kPi * d * d / geom.wavelength();
  Eigen::Index m = 0;
  for (int mz = -geom.half_z(); mz <= geom.half_z(); ++mz) {
    for (int my = -geom.half_y(); my <= geom.half_y(); ++my, ++m) {
      const double w = mz * u - my * v;
      out[m] = scale * (static_cast<double>(mz) * mz + static_cast<double>(my) * my - w * w);
    }
  }
  return out;
}

DistanceFit fit_distance(const CVector& t_hat, const RVector& f) {
  if (t_hat.size() != f.size() || f.size() < 2) {
    throw DomainError("t_hat and f must have equal length >= 2");
  }
  DistanceFit fit;
  fit.f_vector = f;
  fit.a_hat.resize(t_hat.size());
  for (Eigen::Index m = 0; m < t_hat.size(); ++m) fit.a_hat[m] = std::arg(t_hat[m]);

  // Normal equations of [1 f] [sigma_r; 1/r] = a, solved in centered form.
  const double f_mean = f.mean();
  const double a_mean = fit.a_hat.mean();
  const RVector fc = f.array() - f_mean;
  const double sxx = fc.squaredNorm();
  if (!(sxx > 1e-24 * std::max(1.0, f.squaredNorm()))) {
    throw DegenerateInputError("curvature profile is constant; distance is unidentifiable");
  }
  fit.inv_r = fc.dot(fit.a_hat.array().matrix() - RVector::Constant(f.size(), a_mean)) / sxx;
  fit.sigma_r = a_mean - fit.inv_r * f_mean;
  if (!(fit.inv_r > 0.0) || !std::isfinite(fit.inv_r)) {
    throw FitFailure("distance fit returned non-positive range");
  }
  fit.r_hat = 1.0 / fit.inv_r;
  return fit;
}

double max_curvature_phase(const ArrayGeometry& geom, double r) {
  const double d = geom.spacing();
  const double rho = static_cast<double>(geom.half_y()) * geom.half_y() +
                     static_cast<double>(geom.half_z()) * geom.half_z();
  return kPi * d * d / geom.wavelength() * rho / r;
}

Complex estimate_gain(const CVector& h_ls, double u, double v, double r,
                      const ArrayGeometry& geom) {
  const CVector b = steering_fresnel(geom, u, v, r).entries;
  const double energy = b.squaredNorm();
  if (!(energy > 0.0)) throw DegenerateInputError("steering vector is zero");
  return b.dot(h_ls) / energy;  // Eigen's dot conjugates the left operand
}

Complex estimate_gain(const ReceivedBlock& block, double u, double v, double r,
                      const ArrayGeometry& geom) {
  return estimate_gain(ls_channel_estimate(block).ls_channel, u, v, r, geom);
}

ChannelEstimate reconstruct(const ArrayGeometry& geom, double u, double v, double r,
                            Complex beta, const EstimateDiagnostics& diagnostics) {
  ChannelEstimate out;
  out.u_hat = u;
  out.v_hat = v;
  out.r_hat = r;
  out.beta_hat = beta;
  out.h_hat = beta * steering_fresnel(geom, u, v, r).entries;
  out.diagnostics = diagnostics;
  return out;
}

}  // namespace nearfield
