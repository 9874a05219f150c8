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
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nearfield/experiment_config.hpp"
#include "nearfield/sadce.hpp"

namespace nearfield {

/// Uniform position in the user box converted to (u, v, r); beta ~ CN(0, 1).
/// Points below the Fresnel floor are redrawn a bounded number of times.
SourceTruth sample_source(const ExperimentConfig& config, Rng& rng);

struct MethodOutcome {
  Method method = Method::sadce;
  bool failed = false;
  std::string failure;
  double u_hat = 0.0;
  double v_hat = 0.0;
  double r_hat = 0.0;
  double err_u = 0.0;  // absolute errors; NaN where the method has no parameter
  double err_v = 0.0;
  double err_r = 0.0;
  double nmse = 0.0;   // ||h_hat - h||^2 / ||h||^2
  double runtime_ms = 0.0;
};

struct TrialRecord {
  SourceTruth truth;
  double snr_db = 0.0;
  int pilot_length = 1;
  std::uint64_t trial_index = 0;
  std::vector<MethodOutcome> outcomes;  // in config method order
};

struct SweepPoint {
  double snr_db = 0.0;
  int pilot_length = 1;
};

/// Sweep points: every SNR crossed with every pilot length, SNR-major.
std::vector<SweepPoint> sweep_points(const ExperimentConfig& config);

/// Truth, noiseless channel and observation of one trial.
struct TrialInputs {
  SourceTruth truth;
  CVector channel;
  ReceivedBlock block;
};

/// The source and gain come from the (seed, trial) stream and are shared
/// across sweep points; the noise comes from the (seed, point, trial) stream.
TrialInputs trial_inputs(const ExperimentConfig& config, const SweepPoint& point,
                         std::size_t point_index, std::uint64_t trial_index);

/// One trial. The source and gain come from the (seed, trial) stream and are
/// shared across sweep points; the noise comes from the (seed, point, trial)
/// stream. Method failures are recorded, never thrown.
TrialRecord run_trial(const ExperimentConfig& config, const SweepPoint& point,
                      std::size_t point_index, std::uint64_t trial_index);

struct SweepRow {
  std::string method;
  double snr_db = 0.0;
  int pilot_len = 1;
  int trials = 0;
  int failures = 0;
  double rmse_u = 0.0;
  double rmse_v = 0.0;
  double rmse_r_m = 0.0;
  double nmse_db = 0.0;
  double mean_runtime_ms = 0.0;
  // Robust companions, not written to CSV.
  double median_abs_u = 0.0;
  double median_abs_v = 0.0;
  double median_abs_r = 0.0;
  double median_nmse_db = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // point-major, then config method order
  std::vector<TrialRecord> records;

  const SweepRow& row(Method method, double snr_db, int pilot_len) const;
};

/// Reduces materialized trial records into rows. Failed trials are excluded
/// from the error statistics but counted.
SweepRow aggregate(const std::vector<const TrialRecord*>& records, std::size_t method_slot,
                   Method method, const SweepPoint& point, bool record_runtime);

/// Runs every (point, trial) pair on `threads` workers and reduces after the
/// join. Output does not depend on the thread count.
SweepResult sweep(const ExperimentConfig& config, unsigned threads = 1);

/// Columns: method, snr_db, pilot_len, trials, failures, rmse_u, rmse_v,
/// rmse_r_m, nmse_db, mean_runtime_ms. 9 significant digits.
void write_csv(const SweepResult& result, std::ostream& out);
std::string format_number(double value);

}  // namespace nearfield
