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

// nfsim: near-field channel estimation simulator.
//
//   nfsim estimate   [--config f] [--seed n] [--snr db] [--pilot-length L] [--trial i]
//   nfsim sweep      [--config f] [--seed n] [--threads n] [--out f]
//   nfsim paper-fig2 [--threads n] [--out f] [--print-config]
//   nfsim paper-fig3 [--threads n] [--out f] [--print-config]
//   nfsim selftest

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <nearfield/baselines.hpp>
#include <nearfield/experiment_config.hpp>
#include <nearfield/harness.hpp>
#include <nearfield/sadce.hpp>
#include <nearfield_oracles/oracles.hpp>

namespace {

using namespace nearfield;
using nlohmann::json;

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> methods;
  std::string model;
  std::optional<int> trials;
  bool no_timing = false;
};

void add_overrides(CLI::App* cmd, Overrides& o, bool with_config) {
  if (with_config) cmd->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--method", o.methods, "Methods: sadce, ls, music3d")->delimiter(',');
  cmd->add_option("--model", o.model, "Synthesis model: exact or fresnel")
      ->check(CLI::IsMember({"exact", "fresnel"}));
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
  cmd->add_flag("--no-timing", o.no_timing, "Write 0 in the runtime column");
}

ExperimentConfig resolve(const Overrides& o, ExperimentConfig base) {
  ExperimentConfig c = o.config_path.empty() ? std::move(base) : load_config(o.config_path);
  if (o.seed) c.rng_seed = *o.seed;
  if (!o.methods.empty()) {
    c.methods.clear();
    for (const auto& m : o.methods) c.methods.push_back(parse_method(m));
  }
  if (!o.model.empty()) c.synthesis_model = parse_channel_model(o.model);
  if (o.trials) c.trials = *o.trials;
  if (o.no_timing) c.record_runtime = false;
  c.validate();
  return c;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

int run_estimate(const ExperimentConfig& c, double snr, int pilot_length, std::uint64_t trial,
                 const std::string& out_path) {
  const TrialRecord rec = run_trial(c, {snr, pilot_length}, 0, trial);
  json j;
  j["config"] = {{"m_y_count", c.geometry.m_y_count}, {"m_z_count", c.geometry.m_z_count},
                 {"wavelength", c.geometry.wavelength}, {"spacing", c.array().spacing()},
                 {"synthesis_model", to_string(c.synthesis_model)}, {"rng_seed", c.rng_seed}};
  j["snr_db"] = snr;
  j["pilot_len"] = pilot_length;
  j["trial"] = trial;
  j["truth"] = {{"u", rec.truth.u}, {"v", rec.truth.v}, {"r", rec.truth.r},
                {"beta", complex_json(rec.truth.beta)}};
  json methods = json::array();
  for (const MethodOutcome& o : rec.outcomes) {
    json m = {{"method", to_string(o.method)}, {"failed", o.failed}};
    if (o.failed) m["failure"] = o.failure;
    m["u_hat"] = number(o.u_hat);
    m["v_hat"] = number(o.v_hat);
    m["r_hat"] = number(o.r_hat);
    m["err_u"] = number(o.err_u);
    m["err_v"] = number(o.err_v);
    m["err_r"] = number(o.err_r);
    m["nmse_db"] = number(10.0 * std::log10(o.nmse));
    m["runtime_ms"] = o.runtime_ms;
    methods.push_back(std::move(m));
  }
  j["methods"] = std::move(methods);

  // Intermediate quantities of the SADCE pipeline for the same observation.
  if (c.has_method(Method::sadce)) {
    const TrialInputs in = trial_inputs(c, {snr, pilot_length}, 0, trial);
    try {
      const auto est = sadce_estimate(in.block, c.array(), {c.rotation_grid, TSolver::analytic, 1e-6});
      const auto& d = est.diagnostics;
      j["diagnostics"] = {{"peak_iy", d.peak.iy},
                          {"peak_iz", d.peak.iz},
                          {"initial_u", d.initial.u},
                          {"initial_v", d.initial.v},
                          {"delta_u", d.du},
                          {"delta_v", d.dv},
                          {"sigma_r", d.sigma_r},
                          {"beta_hat", complex_json(est.beta_hat)},
                          {"rotation_evaluations", d.rotation_evaluations}};
    } catch (const std::exception& e) {
      j["diagnostics"] = {{"error", e.what()}};
    }
  }
  emit(j.dump(2) + "\n", out_path);
  return 0;
}

int run_sweep(const ExperimentConfig& c, unsigned threads, const std::string& out_path) {
  std::ostringstream csv;
  write_csv(sweep(c, threads), csv);
  emit(csv.str(), out_path);
  return 0;
}

// Oracle suites: each check compares a library routine with an independent
// reference implementation.
int run_selftest() {
  int failures = 0;
  auto report = [&](const char* name, bool ok, double value, double tol) {
    std::printf("%s %-34s value=%.3e tol=%.1e\n", ok ? "PASS" : "FAIL", name, value, tol);
    if (!ok) ++failures;
  };
  const ArrayGeometry array41(41, 41, 0.03);
  Rng rng = make_stream(1, {});
  std::normal_distribution<double> n(0.0, 1.0);

  {
    CMatrix x(21, 17);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = {n(rng), n(rng)};
    const double err = (dft2(x) - oracle::naive_dft2(x)).cwiseAbs().maxCoeff();
    report("dft2 vs naive double sum", err < 1e-9, err, 1e-9);
  }
  {
    const double err = oracle::max_fresnel_phase_error(array41, 0.5, 0.5, 3.0);
    report("fresnel phase error at 3 m", err < 0.2, err, 0.2);
  }
  {
    double worst = 0.0;
    for (int my : {-20, 0, 13}) {
      for (int mz : {-7, 0, 20}) {
        worst = std::max(worst, std::abs(element_distance(my, mz, 0.3, -0.4, 4.0, array41.spacing()) -
                                         oracle::distance_3d(my, mz, 0.3, -0.4, 4.0, array41.spacing())));
      }
    }
    report("element distance vs 3D coordinates", worst < 1e-12, worst, 1e-12);
  }
  const SourceTruth src{0.21, -0.34, 4.8, {0.6, -0.8}};
  const CVector h = synthesize_channel(array41, src, ChannelModel::fresnel);
  {
    const CMatrix expect = oracle::anti_diagonal_closed_form(array41, src.u, src.v, 1.0);
    const double err = (build_anti_diagonal(h, array41).values - expect).cwiseAbs().maxCoeff();
    report("anti-diagonal closed form", err < 1e-10, err, 1e-10);
  }
  {
    const CVector t = solve_t_analytic(h, src.u, src.v, array41);
    const double err = (t - oracle::true_t(array41, src.u, src.v, src.r)).cwiseAbs().maxCoeff();
    report("analytic t vs direct curvature", err < 1e-12, err, 1e-12);
  }
  {
    const ArrayGeometry small(9, 9, 0.03);
    CVector g(81);
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = {n(rng), n(rng)};
    const CVector ta = solve_t_analytic(g, 0.1, 0.2, small);
    const double gap = (solve_t_dense(g, 0.1, 0.2, small, 1e-6) - ta).norm() / ta.norm();
    report("dense vs analytic t-solve", gap < 1e-6, gap, 1e-6);
  }
  {
    const CVector noisy = ls_channel_estimate(
        transmit(h, generate_pilots(1, 1.0, PilotKind::all_ones), 0.01, 5)).ls_channel;
    const auto est = sadce_estimate(noisy, array41);
    const CVector t = solve_t_analytic(noisy, est.u_hat, est.v_hat, array41);
    const RVector f = f_vector(est.u_hat, est.v_hat, array41);
    const double gap = std::abs(oracle_distance_grid(t, f, 1.0, 20.0, 1e-3).r_hat - fit_distance(t, f).r_hat);
    report("distance fit vs 1 mm grid", gap <= 2e-3, gap, 2e-3);
  }
  {
    const ArrayGeometry near(9, 9, 1.0);
    GridSpec grid;
    grid.u = {11, -0.5, 0.5};
    grid.v = {11, -0.5, 0.5};
    grid.r = {8, 2.0, 9.0};
    const CVector hn = ls_channel_estimate(transmit(
        synthesize_channel(near, {0.12, -0.27, 5.4}, ChannelModel::fresnel),
        generate_pilots(1, 1.0, PilotKind::all_ones), 0.05, 6)).ls_channel;
    const auto fast = music3d_search(hn, grid, near);
    const auto brute = oracle::brute_force_music(hn, grid, near);
    const double gap = std::abs(fast.objective - brute.objective);
    report("music3d search vs brute force", fast.index == brute.index && gap < 1e-9, gap, 1e-9);
  }
  {
    const SourceTruth on_grid{8.0 / 41.0, -6.0 / 41.0, 5.0, {1.0, 0.5}};
    const CVector h0 = synthesize_channel(array41, on_grid, ChannelModel::fresnel);
    const auto est = sadce_estimate(h0, array41);
    const double err = std::max({std::abs(est.u_hat - on_grid.u), std::abs(est.v_hat - on_grid.v),
                                 std::abs(est.r_hat - on_grid.r) / on_grid.r});
    report("noiseless pipeline", err < 1e-9, err, 1e-9);
  }
  std::printf("%d check(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-field XL-MIMO channel estimation simulator"};
  app.require_subcommand(1);

  Overrides est_o;
  double snr = 10.0;
  int pilot_length = 1;
  std::uint64_t trial = 0;
  std::string est_out;
  auto* est = app.add_subcommand("estimate", "Run one trial and print the estimates as JSON");
  add_overrides(est, est_o, true);
  est->add_option("--snr", snr, "SNR in dB");
  est->add_option("--pilot-length", pilot_length, "Pilot length L")->check(CLI::PositiveNumber);
  est->add_option("--trial", trial, "Trial index selecting the source and noise streams");
  est->add_option("--out", est_out, "Output file (default stdout)");

  Overrides sweep_o;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string sweep_out;
  auto* sw = app.add_subcommand("sweep", "Monte Carlo sweep, CSV output");
  add_overrides(sw, sweep_o, true);
  sw->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  sw->add_option("--out", sweep_out, "Output CSV (default stdout)");

  struct Preset {
    Overrides o;
    std::string out;
    bool print_config = false;
  };
  Preset fig2;
  Preset fig3;
  auto* p2 = app.add_subcommand("paper-fig2", "Preset: RMSE/NMSE versus SNR");
  auto* p3 = app.add_subcommand("paper-fig3", "Preset: NMSE versus pilot length");
  for (auto [cmd, p] : {std::pair{p2, &fig2}, std::pair{p3, &fig3}}) {
    add_overrides(cmd, p->o, false);
    cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", p->out, "Output CSV (default stdout)");
    cmd->add_flag("--print-config", p->print_config, "Print the preset config as JSON and exit");
  }

  auto* self = app.add_subcommand("selftest", "Check the library against independent oracles");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*est) {
      const ExperimentConfig c = resolve(est_o, paper_fig2_config());
      return run_estimate(c, snr, pilot_length, trial, est_out);
    }
    if (*sw) return run_sweep(resolve(sweep_o, paper_fig2_config()), threads, sweep_out);
    for (auto [cmd, p, base] : {std::tuple{p2, &fig2, paper_fig2_config()},
                                std::tuple{p3, &fig3, paper_fig3_config()}}) {
      if (!*cmd) continue;
      const ExperimentConfig c = resolve(p->o, base);
      if (p->print_config) {
        emit(to_json(c), p->out);
        return 0;
      }
      return run_sweep(c, threads, p->out);
    }
    if (*self) return run_selftest();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "nfsim: %s\n", e.what());
    return 2;
  }
  return 0;
}
