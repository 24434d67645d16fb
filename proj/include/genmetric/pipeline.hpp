#pragma once

// End-to-end toy run: fit a Gaussian generator to a 2-D real set epoch by
// epoch, score each epoch's samples with LFID, feed the monitor, and stop when
// the LFID curve flattens.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "genmetric/actb.hpp"
#include "genmetric/lfid.hpp"
#include "genmetric/monitor.hpp"
#include "genmetric/plot.hpp"
#include "genmetric/run_report.hpp"
#include "genmetric/toy_generator.hpp"

namespace genmetric {

struct DemoConfig {
  std::uint64_t seed = 7;
  std::int64_t max_epochs = 40;
  std::size_t steps_per_epoch = 10;
  std::size_t n_real = 2000;
  std::size_t n_gen = 2000;
  AdamConfig adam{0.05, 0.9, 0.999, 1e-8};
  MonitorConfig monitor;
  // Real distribution and how far (in real sigmas) the generator starts from it.
  std::vector<double> real_mu{0.5, -1.0};
  std::vector<double> real_sigma{1.0, 0.8};
  double start_offset_sigmas = 3.0;
  std::optional<std::filesystem::path> out_dir;
};

struct DemoOutcome {
  RunReport report;
  double initial_lfid = 0.0;
  double final_lfid = 0.0;
  GateDecision decision = GateDecision::adjust;
};

inline DemoOutcome run_demo_toy(const DemoConfig& cfg) {
  cfg.monitor.validate();
  if (cfg.max_epochs < 1) throw ValidationError("demo needs at least one epoch");
  if (cfg.real_mu.size() != cfg.real_sigma.size() || cfg.real_mu.empty()) {
    throw ValidationError("real mean and sigma must have the same non-zero length");
  }
  const std::size_t d = cfg.real_mu.size();

  ToyGenerator truth{cfg.real_mu, {}, cfg.seed};
  for (double s : cfg.real_sigma) truth.log_sigma.push_back(std::log(s));
  ActivationSet real_raw = sample_toy(truth, cfg.n_real, cfg.seed);
  const ActivationSet real(real_raw.n_samples(), d, {real_raw.values().begin(), real_raw.values().end()}, "toy",
                           "real");

  ToyGenerator init{cfg.real_mu, std::vector<double>(d, 0.0), cfg.seed};
  for (std::size_t j = 0; j < d; ++j) {
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    init.mu[j] += sign * cfg.start_offset_sigmas * cfg.real_sigma[j];
  }
  ToyTrainer trainer(real, init, cfg.adam);

  DemoOutcome out;
  RunReport& report = out.report;
  report.subcommand = "demo-toy";

  std::vector<std::string> artifacts;
  auto save = [&](const ActivationSet& set, const std::string& name) {
    if (!cfg.out_dir) return;
    const auto p = *cfg.out_dir / name;
    save_activations(set, p);
    artifacts.push_back(p.string());
  };
  if (cfg.out_dir) std::filesystem::create_directories(*cfg.out_dir);
  save(real, "real.actb");

  // Generated samples for epoch e use a seed distinct from the real set's.
  auto gen_seed = [&](std::int64_t epoch) {
    return CounterRng::bits(cfg.seed, 0xD1B54A32D192ED03ULL + static_cast<std::uint64_t>(epoch));
  };

  auto score = [&](std::int64_t epoch) {
    const auto gen = sample_toy(trainer.generator(), cfg.n_gen, gen_seed(epoch));
    char name[32];
    std::snprintf(name, sizeof name, "gen_epoch_%03lld.actb", static_cast<long long>(epoch));
    save(gen, name);
    auto r = lfid_score(real, gen, SelectionSpec::all());
    r.add_param("epoch", epoch);
    return r;
  };

  auto initial = score(0);
  out.initial_lfid = initial.value;
  report.reports.push_back(initial);

  MonitorState state;
  std::vector<PlotPoint> curve{{0.0, initial.value}};
  for (std::int64_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    trainer.train(cfg.steps_per_epoch);
    auto r = score(epoch);
    state = monitor_update(std::move(state), cfg.monitor, epoch, r.value);
    curve.push_back({static_cast<double>(epoch), r.value});
    out.final_lfid = r.value;
    report.reports.push_back(std::move(r));
    if (state.stopped) break;
  }

  out.decision = quality_gate(out.final_lfid, cfg.monitor.gate);
  auto& last = report.reports.back();
  last.add_param("decision", std::string(to_string(out.decision)));
  last.add_param("threshold_T", cfg.monitor.gate.threshold);
  last.add_param("initial_lfid", out.initial_lfid);

  if (cfg.out_dir) {
    const auto svg = *cfg.out_dir / "lfid_curve.svg";
    emit_plot(curve, svg, {"LFID during toy training", "epoch", "LFID"});
    artifacts.push_back(svg.string());
    artifacts.push_back(plot_csv_path(svg).string());
  }
  report.monitor = MonitorSnapshot{cfg.monitor, std::move(state)};
  report.artifacts = std::move(artifacts);
  return out;
}

}  // namespace genmetric
