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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <nearfield/experiment_config.hpp>
#include <nearfield/harness.hpp>

using namespace nearfield;

namespace {

// LS NMSE of the SNR-sweep preset at 0 dB over 20 trials, pinned from the first run.
constexpr double kLsNmseDb = 6.56252587;

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.geometry = {9, 9, std::nullopt, 0.03};
  c.bs_position = {0.0, 0.0, 0.0};
  c.user_region = {{2.0, -0.5, -0.5}, {3.0, 0.5, 0.5}};
  c.snr_grid = {10.0, 20.0};
  c.pilot_lengths = {1, 2};
  c.trials = 6;
  c.rng_seed = 7;
  c.record_runtime = false;
  return c;
}

std::string csv_of(const SweepResult& r) {
  std::ostringstream out;
  write_csv(r, out);
  return out.str();
}

}  // namespace

TEST_CASE("method names") {
  CHECK(parse_method("music3d") == Method::music3d);
  CHECK(std::string(to_string(Method::sadce)) == "sadce");
  CHECK_THROWS_AS(parse_method("omp"), ConfigError);
}

TEST_CASE("config parsing round trip") {
  const ExperimentConfig c = paper_fig3_config();
  const ExperimentConfig back = parse_config(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(back.pilot_lengths == std::vector<int>{1, 2, 4, 8, 16});
  CHECK(back.geometry == c.geometry);
  CHECK(back.user_region == c.user_region);
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(parse_config(R"({"trials": 3, "bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"geometry": {"m_y_count": 41, "depth": 2}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"trials": 3,)"), ConfigError);
  const std::string base = to_json(paper_fig2_config());
  auto with = [&](const std::string& key, const std::string& value) {
    std::string text = base;
    const std::string needle = "\"" + key + "\": ";
    const auto pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    const auto end = text.find_first_of(",\n", pos + needle.size());
    return text.replace(pos + needle.size(), end - pos - needle.size(), value);
  };
  CHECK_NOTHROW(parse_config(base));
  CHECK_THROWS_AS(parse_config(with("trials", "0")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("pilot_length", "0")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("synthesis_model", "\"planar\"")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("pilot_kind", "\"bpsk\"")), ConfigError);
  CHECK_THROWS_AS(parse_config(with("m_y_count", "40")), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"pilot_length": 1, "pilot_length_grid": [1, 2]})"), ConfigError);
}

TEST_CASE("config validation") {
  ExperimentConfig c = paper_fig2_config();
  CHECK_NOTHROW(c.validate());
  c.snr_grid.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c = paper_fig2_config();
  // square 1 m below the AP violates the Fresnel floor
  c.user_region = {{-1.2, -2.5, 5.0}, {3.8, 2.5, 5.0}};
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c = paper_fig2_config();
  c.methods = {Method::music3d};
  CHECK_THROWS_AS(c.validate(), ConfigError);

  CHECK_NOTHROW(small_config().validate());
}

TEST_CASE("preset files match the built-in presets") {
  const auto dir = std::filesystem::path(NEARFIELD_PRESET_DIR);
  CHECK(to_json(load_config(dir / "paper-fig2.json")) == to_json(paper_fig2_config()));
  CHECK(to_json(load_config(dir / "paper-fig3.json")) == to_json(paper_fig3_config()));
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
}

TEST_CASE("preset scene ranges") {
  const ExperimentConfig c = paper_fig2_config();
  const auto frame = array_frame(c.bs_position, c.user_region.centroid());
  const SourceTruth center = source_from_position(c.user_region.centroid(), c.bs_position, frame);
  CHECK(center.r == doctest::Approx(5.0));
  CHECK(std::abs(center.u) < 1e-15);
  CHECK(std::abs(center.v) < 1e-15);
  CHECK(fresnel_floor(c.array()) == doctest::Approx(3.075));
}

TEST_CASE("degenerate box on the boresight") {
  ExperimentConfig c = paper_fig2_config();
  c.user_region = {{1.3, 0.0, 1.0}, {1.3, 0.0, 1.0}};
  Rng rng = make_stream(1, {});
  const SourceTruth s = sample_source(c, rng);
  CHECK(s.u == doctest::Approx(0.0));
  CHECK(s.v == doctest::Approx(0.0));
  CHECK(s.r == doctest::Approx(5.0));
}

TEST_CASE("sampled ranges stay between box corner distances") {
  const ExperimentConfig c = paper_fig2_config();
  double hi = 0.0;
  for (int corner = 0; corner < 8; ++corner) {
    Point3 p{};
    for (int i = 0; i < 3; ++i) {
      p[i] = ((corner >> i) & 1) ? c.user_region.max[i] : c.user_region.min[i];
      p[i] -= c.bs_position[i];
    }
    const double dist = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    hi = std::max(hi, dist);
  }
  const double lo = 5.0;  // closest point of the square is straight below the AP
  Rng rng = make_stream(2, {});
  for (int i = 0; i < 2000; ++i) {
    const SourceTruth s = sample_source(c, rng);
    CHECK(s.r >= lo - 1e-12);
    CHECK(s.r <= hi + 1e-12);
  }
}

TEST_CASE("sampled positions average to the box center") {
  const ExperimentConfig c = paper_fig2_config();
  const auto frame = array_frame(c.bs_position, c.user_region.centroid());
  Rng rng = make_stream(3, {});
  Point3 acc{0.0, 0.0, 0.0};
  const int draws = 100'000;
  for (int i = 0; i < draws; ++i) {
    const SourceTruth s = sample_source(c, rng);
    const double w = std::sqrt(1.0 - s.u * s.u - s.v * s.v);
    for (int k = 0; k < 3; ++k) {
      acc[k] += c.bs_position[k] + s.r * (w * frame[0][k] + s.v * frame[1][k] + s.u * frame[2][k]);
    }
  }
  const Point3 center = c.user_region.centroid();
  const double extent = 5.0;
  for (int k = 0; k < 3; ++k) CHECK(std::abs(acc[k] / draws - center[k]) < 0.01 * extent);
}

TEST_CASE("noiseless trial on the boresight") {
  ExperimentConfig c = paper_fig2_config();
  c.user_region = {{1.3, 0.0, 1.0}, {1.3, 0.0, 1.0}};
  const TrialRecord rec = run_trial(c, {std::numeric_limits<double>::infinity(), 1}, 0, 0);
  REQUIRE(rec.outcomes.size() == 2);
  const MethodOutcome& s = rec.outcomes[0];
  CHECK_FALSE(s.failed);
  CHECK(s.err_u <= 1e-9);
  CHECK(s.err_v <= 1e-9);
  CHECK(s.err_r <= 1e-9);
  CHECK(s.nmse <= 1e-10);
  CHECK(rec.outcomes[1].nmse == 0.0);
  CHECK(std::isnan(rec.outcomes[1].err_u));
}

TEST_CASE("trial records are deterministic") {
  const ExperimentConfig c = paper_fig2_config();
  const TrialRecord a = run_trial(c, {10.0, 1}, 2, 17);
  const TrialRecord b = run_trial(c, {10.0, 1}, 2, 17);
  CHECK(a.truth.u == b.truth.u);
  CHECK(a.truth.beta == b.truth.beta);
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    CHECK(a.outcomes[i].nmse == b.outcomes[i].nmse);
    CHECK(std::memcmp(&a.outcomes[i].r_hat, &b.outcomes[i].r_hat, sizeof(double)) == 0);
  }
  // the source is shared across sweep points, the noise is not
  const TrialRecord other = run_trial(c, {20.0, 1}, 4, 17);
  CHECK(other.truth.r == a.truth.r);
  CHECK(other.outcomes[1].nmse != a.outcomes[1].nmse);
}

TEST_CASE("ls nmse regression at 0 dB") {
  ExperimentConfig c = paper_fig2_config();
  c.snr_grid = {0.0};
  c.trials = 20;
  c.methods = {Method::ls};
  c.record_runtime = false;
  const SweepRow& row = sweep(c).row(Method::ls, 0.0, 1);
  CHECK(row.nmse_db == doctest::Approx(kLsNmseDb).epsilon(1e-8));
  CHECK(row.failures == 0);
}

TEST_CASE("single-trial sweep reproduces the trial record") {
  ExperimentConfig c = small_config();
  c.snr_grid = {15.0};
  c.pilot_lengths = {2};
  c.trials = 1;
  const SweepResult res = sweep(c);
  REQUIRE(res.rows.size() == 2);
  const TrialRecord rec = run_trial(c, {15.0, 2}, 0, 0);
  const SweepRow& s = res.row(Method::sadce, 15.0, 2);
  CHECK(s.trials == 1);
  CHECK(s.rmse_u == rec.outcomes[0].err_u);
  CHECK(s.rmse_v == rec.outcomes[0].err_v);
  CHECK(s.rmse_r_m == rec.outcomes[0].err_r);
  CHECK(s.nmse_db == doctest::Approx(10.0 * std::log10(rec.outcomes[0].nmse)));
  CHECK(res.row(Method::ls, 15.0, 2).nmse_db ==
        doctest::Approx(10.0 * std::log10(rec.outcomes[1].nmse)));
}

TEST_CASE("sweep output is independent of the thread count") {
  const ExperimentConfig c = small_config();
  const std::string one = csv_of(sweep(c, 1));
  CHECK(one == csv_of(sweep(c, 3)));
  CHECK(one == csv_of(sweep(c, 8)));
  CHECK(one.rfind("method,snr_db,pilot_len,trials,failures,rmse_u,rmse_v,rmse_r_m,nmse_db,mean_runtime_ms\n", 0) == 0);
}

TEST_CASE("aggregation excludes failures but counts them") {
  TrialRecord ok;
  ok.outcomes.push_back({Method::sadce, false, "", 0, 0, 0, 0.1, 0.2, 0.3, 0.01, 1.0});
  TrialRecord bad;
  bad.outcomes.push_back({Method::sadce, true, "fit", 0, 0, 0, 9.0, 9.0, 9.0, 9.0, 3.0});
  const SweepRow row = aggregate({&ok, &bad, &ok}, 0, Method::sadce, {5.0, 1}, true);
  CHECK(row.trials == 3);
  CHECK(row.failures == 1);
  CHECK(row.rmse_u == doctest::Approx(0.1));
  CHECK(row.rmse_r_m == doctest::Approx(0.3));
  CHECK(row.nmse_db == doctest::Approx(-20.0));
  CHECK(row.mean_runtime_ms == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(-12345678901.0) == "-1.23456789e+10");
}
