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

#include "nearfield/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

namespace nearfield {

namespace {

constexpr std::uint64_t kSourceStream = 0x51;
constexpr std::uint64_t kPilotStream = 0x52;
constexpr std::uint64_t kNoiseStream = 0x53;
constexpr int kMaxResamples = 1000;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double nmse(const CVector& estimate, const CVector& truth) {
  return (estimate - truth).squaredNorm() / truth.squaredNorm();
}

}  // namespace

SourceTruth sample_source(const ExperimentConfig& config, Rng& rng) {
  const ArrayGeometry geom = config.array();
  const double floor = fresnel_floor(geom, config.fresnel_floor_multiple);
  const auto frame = array_frame(config.bs_position, config.user_region.centroid());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    Point3 p{};
    for (int i = 0; i < 3; ++i) {
      const double lo = config.user_region.min[i];
      const double hi = config.user_region.max[i];
      p[i] = lo + (hi - lo) * unit(rng);
    }
    SourceTruth s = source_from_position(p, config.bs_position, frame);
    if (s.r < floor) continue;
    const double re = gauss(rng);
    const double im = gauss(rng);
    s.beta = Complex(re, im);
    return s;
  }
  throw ConfigError("could not sample a user beyond the Fresnel floor");
}

std::vector<SweepPoint> sweep_points(const ExperimentConfig& config) {
  std::vector<SweepPoint> points;
  for (double snr : config.snr_grid) {
    for (int l : config.pilot_lengths) points.push_back({snr, l});
  }
  return points;
}

TrialInputs trial_inputs(const ExperimentConfig& config, const SweepPoint& point,
                         std::size_t point_index, std::uint64_t trial_index) {
  TrialInputs in;
  Rng source_rng = make_stream(config.rng_seed, {trial_index, kSourceStream});
  in.truth = sample_source(config, source_rng);
  Rng pilot_rng = make_stream(config.rng_seed, {trial_index, kPilotStream});
  const PilotSequence pilots =
      generate_pilots(static_cast<std::size_t>(point.pilot_length), config.pilot_power,
                      config.pilot_kind, pilot_rng());
  in.channel = synthesize_channel(config.array(), in.truth, config.synthesis_model);
  Rng noise_rng = make_stream(config.rng_seed, {point_index, trial_index, kNoiseStream});
  in.block = transmit(in.channel, pilots,
                      noise_power_from_snr(point.snr_db, config.pilot_power), noise_rng);
  return in;
}

TrialRecord run_trial(const ExperimentConfig& config, const SweepPoint& point,
                      std::size_t point_index, std::uint64_t trial_index) {
  const ArrayGeometry geom = config.array();
  TrialRecord record;
  record.snr_db = point.snr_db;
  record.pilot_length = point.pilot_length;
  record.trial_index = trial_index;

  const TrialInputs in = trial_inputs(config, point, point_index, trial_index);
  record.truth = in.truth;
  const CVector& h = in.channel;
  const ReceivedBlock& block = in.block;

  const SadceOptions sadce_options{config.rotation_grid, TSolver::analytic, 1e-6};
  for (Method method : config.methods) {
    MethodOutcome out;
    out.method = method;
    const auto start = std::chrono::steady_clock::now();
    try {
      CVector h_hat;
      if (method == Method::ls) {
        h_hat = ls_channel_estimate(block).ls_channel;
        out.err_u = out.err_v = out.err_r = kNan;
        out.u_hat = out.v_hat = out.r_hat = kNan;
      } else {
        ChannelEstimate est;
        if (method == Method::sadce) {
          est = sadce_estimate(block, geom, sadce_options);
        } else {
          const CVector h_ls = ls_channel_estimate(block).ls_channel;
          const MusicEstimate m = music3d_search(h_ls, config.music_grid, geom);
          est = reconstruct(geom, m.u, m.v, m.r, estimate_gain(h_ls, m.u, m.v, m.r, geom));
        }
        h_hat = std::move(est.h_hat);
        out.u_hat = est.u_hat;
        out.v_hat = est.v_hat;
        out.r_hat = est.r_hat;
        out.err_u = std::abs(est.u_hat - record.truth.u);
        out.err_v = std::abs(est.v_hat - record.truth.v);
        out.err_r = std::abs(est.r_hat - record.truth.r);
      }
      out.nmse = nmse(h_hat, h);
      const bool finite = std::isfinite(out.nmse) &&
                          (method == Method::ls || (std::isfinite(out.err_u) &&
                                                    std::isfinite(out.err_v) &&
                                                    std::isfinite(out.err_r)));
      if (!finite) {
        out.failed = true;
        out.failure = "non-finite error";
      }
    } catch (const std::exception& e) {
      out.failed = true;
      out.failure = e.what();
    }
    const auto stop = std::chrono::steady_clock::now();
    out.runtime_ms =
        config.record_runtime ? std::chrono::duration<double, std::milli>(stop - start).count()
                              : 0.0;
    record.outcomes.push_back(std::move(out));
  }
  return record;
}

namespace {

double median(std::vector<double> values) {
  if (values.empty()) return kNan;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double root_mean_square(const std::vector<double>& values) {
  if (values.empty()) return kNan;
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return std::sqrt(acc / static_cast<double>(values.size()));
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return kNan;
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

}  // namespace

SweepRow aggregate(const std::vector<const TrialRecord*>& records, std::size_t method_slot,
                   Method method, const SweepPoint& point, bool record_runtime) {
  SweepRow row;
  row.method = to_string(method);
  row.snr_db = point.snr_db;
  row.pilot_len = point.pilot_length;
  row.trials = static_cast<int>(records.size());
  std::vector<double> eu, ev, er, en, rt;
  for (const TrialRecord* rec : records) {
    const MethodOutcome& o = rec->outcomes.at(method_slot);
    rt.push_back(o.runtime_ms);
    if (o.failed) {
      ++row.failures;
      continue;
    }
    if (method != Method::ls) {
      eu.push_back(o.err_u);
      ev.push_back(o.err_v);
      er.push_back(o.err_r);
    }
    en.push_back(o.nmse);
  }
  row.rmse_u = root_mean_square(eu);
  row.rmse_v = root_mean_square(ev);
  row.rmse_r_m = root_mean_square(er);
  row.nmse_db = en.empty() ? kNan : 10.0 * std::log10(mean(en));
  row.mean_runtime_ms = record_runtime ? mean(rt) : 0.0;
  row.median_abs_u = median(eu);
  row.median_abs_v = median(ev);
  row.median_abs_r = median(er);
  row.median_nmse_db = en.empty() ? kNan : 10.0 * std::log10(median(en));
  return row;
}

const SweepRow& SweepResult::row(Method method, double snr_db, int pilot_len) const {
  for (const SweepRow& r : rows) {
    if (r.method == to_string(method) && r.snr_db == snr_db && r.pilot_len == pilot_len) {
      return r;
    }
  }
  throw DomainError("no sweep row for the requested method and point");
}

SweepResult sweep(const ExperimentConfig& config, unsigned threads) {
  config.validate();
  const std::vector<SweepPoint> points = sweep_points(config);
  const auto trials = static_cast<std::size_t>(config.trials);
  const std::size_t total = points.size() * trials;

  SweepResult result;
  result.records.resize(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t task = next++; task < total; task = next++) {
      const std::size_t p = task / trials;
      const std::size_t t = task % trials;
      try {
        result.records[task] = run_trial(config, points[p], p, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = total;
      }
    }
  };
  const unsigned workers = std::max(1u, threads);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<const TrialRecord*> slice;
    slice.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) slice.push_back(&result.records[p * trials + t]);
    for (std::size_t slot = 0; slot < config.methods.size(); ++slot) {
      result.rows.push_back(
          aggregate(slice, slot, config.methods[slot], points[p], config.record_runtime));
    }
  }
  return result;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  out << "method,snr_db,pilot_len,trials,failures,rmse_u,rmse_v,rmse_r_m,nmse_db,mean_runtime_ms\n";
  for (const SweepRow& r : result.rows) {
    out << r.method << ',' << format_number(r.snr_db) << ',' << r.pilot_len << ',' << r.trials
        << ',' << r.failures << ',' << format_number(r.rmse_u) << ',' << format_number(r.rmse_v)
        << ',' << format_number(r.rmse_r_m) << ',' << format_number(r.nmse_db) << ','
        << format_number(r.mean_runtime_ms) << '\n';
  }
}

}  // namespace nearfield
