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

#include "nearfield/angle_estimator.hpp"
#include "nearfield/array_model.hpp"
#include "nearfield/distance_estimator.hpp"
#include "nearfield/signal_path.hpp"

namespace nearfield {

enum class TSolver { analytic, dense };

struct SadceOptions {
  RotationGrid rotation;
  TSolver solver = TSolver::analytic;
  double ridge = 1e-6;
};

/// Sequential angle-distance estimate from one received block:
/// LS channel, anti-diagonal DFT angles, rotation refinement, closed-form
/// distance, gain, reconstruction.
///
/// Throws FitFailure, ConditioningError or DegenerateInputError when the data
/// do not support an estimate.
ChannelEstimate sadce_estimate(const ReceivedBlock& block, const ArrayGeometry& geom,
                               const SadceOptions& options = {});

/// Same pipeline starting from an LS channel estimate.
ChannelEstimate sadce_estimate(const CVector& h_ls, const ArrayGeometry& geom,
                               const SadceOptions& options = {});

}  // namespace nearfield
