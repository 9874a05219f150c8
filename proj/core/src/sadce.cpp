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

#include "nearfield/sadce.hpp"

namespace nearfield {

ChannelEstimate sadce_estimate(const CVector& h_ls, const ArrayGeometry& geom,
                               const SadceOptions& options) {
  const AngleSpectrum angles = estimate_angles(h_ls, geom, options.rotation);
  const double u = angles.refined.u;
  const double v = angles.refined.v;

  const CVector t_hat = options.solver == TSolver::dense
                            ? solve_t_dense(h_ls, u, v, geom, options.ridge)
                            : solve_t_analytic(h_ls, u, v, geom);
  const DistanceFit fit = fit_distance(t_hat, f_vector(u, v, geom));
  const Complex beta = estimate_gain(h_ls, u, v, fit.r_hat, geom);

  EstimateDiagnostics diag;
  diag.peak = angles.peak;
  diag.initial = angles.initial;
  diag.du = angles.refined.du;
  diag.dv = angles.refined.dv;
  diag.sigma_r = fit.sigma_r;
  diag.rotation_evaluations = angles.refined.evaluations;
  return reconstruct(geom, u, v, fit.r_hat, beta, diag);
}

ChannelEstimate sadce_estimate(const ReceivedBlock& block, const ArrayGeometry& geom,
                               const SadceOptions& options) {
  return sadce_estimate(ls_channel_estimate(block).ls_channel, geom, options);
}

}  // namespace nearfield
