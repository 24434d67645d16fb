// genmetric: command-line front end for the metrics, LFID, monitoring and
// tuning routines. Every subcommand prints a RunReport JSON document on stdout
// and a short human-readable summary on stderr.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "genmetric/genmetric.hpp"

namespace fs = std::filesystem;
using namespace genmetric;

namespace {

struct Globals {
  bool no_timestamp = false;
};

RunReport new_report(const Globals& g, std::string subcommand) {
  RunReport r;
  r.subcommand = std::move(subcommand);
  if (!g.no_timestamp) r.timestamp = utc_timestamp();
  return r;
}

InputRef input_ref(const fs::path& p) {
  const auto bytes = detail::read_file(p);
  return {p.string(), Digest().str(bytes).hex()};
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GENMETRIC_SEED")) {
    std::uint64_t v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ValidationError("GENMETRIC_SEED is not an integer");
    return v;
  }
  return 7;
}

/// Numeric CSV rows; with allow_header a non-numeric first line is skipped.
std::vector<std::vector<double>> read_numeric_rows(const fs::path& path, bool allow_header) {
  const auto text = detail::read_file(path);
  std::vector<std::vector<double>> rows;
  bool first = true;
  for (const auto line : detail::lines_of(text)) {
    std::vector<double> row;
    bool ok = true;
    for (const auto f : detail::split(line, ',')) {
      double v = 0.0;
      if (!detail::parse_double(f, v)) {
        ok = false;
        break;
      }
      row.push_back(v);
    }
    if (!ok) {
      if (first && allow_header) {
        first = false;
        continue;
      }
      throw FormatError(path.string() + ": non-numeric line '" + std::string(line) + "'");
    }
    first = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path.string() + " holds no numeric rows");
  return rows;
}

std::vector<double> read_flat_numbers(const fs::path& path) {
  std::vector<double> out;
  for (const auto& row : read_numeric_rows(path, false)) out.insert(out.end(), row.begin(), row.end());
  return out;
}

WeightedSamples read_weighted(const fs::path& path) {
  std::vector<double> loc, w;
  for (const auto& row : read_numeric_rows(path, false)) {
    if (row.size() == 1) {
      loc.push_back(row[0]);
      w.push_back(1.0);
    } else if (row.size() == 2) {
      loc.push_back(row[0]);
      w.push_back(row[1]);
    } else {
      throw FormatError(path.string() + ": expected 'x' or 'x,weight' per line");
    }
  }
  return WeightedSamples(std::move(loc), std::move(w));
}

void emit(const RunReport& r) { std::cout << dump_report(r) << '\n'; }

void print_metric(const MetricReport& m) {
  std::cerr << m.metric_name << " = " << detail::fmt_g(m.value, 10) << '\n';
  for (const auto& w : m.warnings) std::cerr << "  warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"genmetric - generative-model evaluation engine"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--no-timestamp", g.no_timestamp, "Omit the timestamp so reports are byte-reproducible");

  // summarize
  std::string sum_path;
  auto* summarize_cmd = app.add_subcommand("summarize", "Mean and covariance of an activation file");
  summarize_cmd->add_option("acts", sum_path)->required();

  // fid
  std::string fid_real, fid_gen;
  auto* fid_cmd = app.add_subcommand("fid", "Frechet distance between two activation files");
  fid_cmd->add_option("real", fid_real)->required();
  fid_cmd->add_option("gen", fid_gen)->required();

  // lfid
  std::string lfid_real, lfid_gen;
  std::optional<std::size_t> lfid_k;
  double lfid_t = kDefaultGateThreshold;
  auto* lfid_cmd = app.add_subcommand("lfid", "Low-dimensional Frechet distance plus quality gate");
  lfid_cmd->add_option("real", lfid_real)->required();
  lfid_cmd->add_option("gen", lfid_gen)->required();
  lfid_cmd->add_option("--top-k", lfid_k, "Keep the K highest-variance columns of the real set");
  lfid_cmd->add_option("--threshold", lfid_t, "Gate threshold T");

  // rank
  std::string rank_path;
  auto* rank_cmd = app.add_subcommand("rank", "Per-feature variances and ranking");
  rank_cmd->add_option("acts", rank_path)->required();

  // is
  std::string is_path;
  auto* is_cmd = app.add_subcommand("is", "Inception score from a class-probability CSV");
  is_cmd->add_option("probs", is_path)->required();

  // div
  std::string div_kind, div_a, div_b, div_estimator = "biased";
  std::optional<double> div_smoothing, div_bandwidth;
  auto* div_cmd = app.add_subcommand("div", "Divergences: kl, js, w (1-D Wasserstein), mmd");
  div_cmd->add_option("kind", div_kind)->required()->check(CLI::IsMember({"kl", "js", "w", "mmd"}));
  div_cmd->add_option("a", div_a)->required();
  div_cmd->add_option("b", div_b)->required();
  div_cmd->add_option("--smoothing", div_smoothing, "kl: add eps to Q and renormalize");
  div_cmd->add_option("--bandwidth", div_bandwidth, "mmd: RBF sigma (default: median heuristic)");
  div_cmd->add_option("--estimator", div_estimator, "mmd: biased or unbiased")
      ->check(CLI::IsMember({"biased", "unbiased"}));

  // frechet-curve
  std::string curve_a, curve_b;
  auto* curve_cmd = app.add_subcommand("frechet-curve", "Discrete Frechet distance between two curve CSVs");
  curve_cmd->add_option("a", curve_a)->required();
  curve_cmd->add_option("b", curve_b)->required();

  // monitor
  MonitorConfig mon_cfg;
  std::string mon_real, mon_plot;
  std::vector<std::string> mon_gen;
  std::optional<std::size_t> mon_k;
  auto* monitor_cmd = app.add_subcommand("monitor", "Early-stopping monitor over an LFID stream");
  monitor_cmd->add_option("--epsilon", mon_cfg.epsilon);
  monitor_cmd->add_option("--patience", mon_cfg.patience);
  monitor_cmd->add_option("--min-epochs", mon_cfg.min_epochs);
  monitor_cmd->add_option("--threshold", mon_cfg.gate.threshold);
  monitor_cmd->add_option("--real", mon_real, "Real activations; with --gen, score one ACTB file per epoch");
  monitor_cmd->add_option("--gen", mon_gen, "Generated activations, one file per epoch in order");
  monitor_cmd->add_option("--top-k", mon_k);
  monitor_cmd->add_option("--plot", mon_plot, "Write the LFID curve as SVG (plus CSV twin)");

  // tune
  std::string tune_grid, tune_cmd_tmpl, tune_real, tune_plot;
  std::optional<std::size_t> tune_k;
  unsigned tune_jobs = 1;
  auto* tune_cmd = app.add_subcommand("tune", "Grid search over an external generator command");
  tune_cmd->add_option("--grid", tune_grid)->required();
  tune_cmd->add_option("--cmd", tune_cmd_tmpl, "Template with {param:NAME} and {out} placeholders")->required();
  tune_cmd->add_option("--real", tune_real)->required();
  tune_cmd->add_option("--top-k", tune_k);
  tune_cmd->add_option("--jobs", tune_jobs)->check(CLI::PositiveNumber);
  tune_cmd->add_option("--plot", tune_plot, "Write LFID per grid point as SVG (plus CSV twin)");

  // demo-toy
  DemoConfig demo;
  std::optional<std::uint64_t> demo_seed;
  std::string demo_out = "demo-toy-out";
  auto* demo_cmd = app.add_subcommand("demo-toy", "Fit a toy Gaussian generator with LFID early stopping");
  demo_cmd->add_option("--seed", demo_seed);
  demo_cmd->add_option("--epochs", demo.max_epochs)->check(CLI::PositiveNumber);
  demo_cmd->add_option("--out-dir", demo_out);
  demo_cmd->add_option("--epsilon", demo.monitor.epsilon);
  demo_cmd->add_option("--patience", demo.monitor.patience);

  // toy-sample
  std::string ts_out;
  std::size_t ts_n = 1000, ts_dim = 2;
  double ts_mean = 0.0, ts_sigma = 1.0;
  std::optional<std::uint64_t> ts_seed;
  std::string ts_source = "generated";
  auto* toy_cmd = app.add_subcommand("toy-sample", "Write samples of an isotropic toy Gaussian as ACTB");
  toy_cmd->add_option("--out", ts_out)->required();
  toy_cmd->add_option("--n", ts_n)->check(CLI::PositiveNumber);
  toy_cmd->add_option("--dim", ts_dim)->check(CLI::PositiveNumber);
  toy_cmd->add_option("--mean", ts_mean);
  toy_cmd->add_option("--sigma", ts_sigma)->check(CLI::PositiveNumber);
  toy_cmd->add_option("--seed", ts_seed);
  toy_cmd->add_option("--source", ts_source);

  // report
  std::string report_path;
  auto* report_cmd = app.add_subcommand("report", "Validate and pretty-print a RunReport JSON file");
  report_cmd->add_option("file", report_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*summarize_cmd) {
      auto r = new_report(g, "summarize");
      const auto set = load_activations(sum_path);
      const auto s = summarize(set);
      MetricReport m;
      m.metric_name = "summary";
      m.value = s.cov.trace();
      m.add_param("n_samples", static_cast<std::int64_t>(s.n_samples));
      m.add_param("dim", static_cast<std::int64_t>(s.dim()));
      m.add_param("layer_tag", set.layer_tag());
      m.add_param("source_tag", set.source_tag());
      m.add_param("mean", std::vector<double>(s.mean.data(), s.mean.data() + s.mean.size()));
      const RowMatrix cov = s.cov;
      m.add_param("cov", std::vector<double>(cov.data(), cov.data() + cov.size()));
      m.warnings = s.warnings;
      m.inputs_digest = Digest().reals(set.values()).hex();
      r.inputs.push_back(input_ref(sum_path));
      std::cerr << "N=" << s.n_samples << " D=" << s.dim() << " trace(cov)=" << detail::fmt_g(m.value, 10) << '\n';
      r.reports.push_back(std::move(m));
      emit(r);
    } else if (*fid_cmd) {
      auto r = new_report(g, "fid");
      const auto m = frechet_gaussian_distance(summarize(load_activations(fid_real)),
                                               summarize(load_activations(fid_gen)));
      r.inputs = {input_ref(fid_real), input_ref(fid_gen)};
      print_metric(m);
      r.reports.push_back(m);
      emit(r);
    } else if (*lfid_cmd) {
      auto r = new_report(g, "lfid");
      const auto gate = GateConfig::with_threshold(lfid_t);
      const auto spec = lfid_k ? SelectionSpec::top_k(*lfid_k) : SelectionSpec::all();
      auto m = lfid_score(load_activations(lfid_real), load_activations(lfid_gen), spec);
      const auto decision = quality_gate(m.value, gate);
      m.add_param("threshold_T", gate.threshold);
      m.add_param("decision", std::string(to_string(decision)));
      r.inputs = {input_ref(lfid_real), input_ref(lfid_gen)};
      print_metric(m);
      std::cerr << "gate (T=" << detail::fmt_g(gate.threshold, 6) << "): " << to_string(decision) << '\n';
      r.reports.push_back(std::move(m));
      emit(r);
    } else if (*rank_cmd) {
      auto r = new_report(g, "rank");
      const auto set = load_activations(rank_path);
      const auto ranking = rank_features(set);
      MetricReport m;
      m.metric_name = "feature_ranking";
      m.value = ranking.variances[ranking.order.front()];
      m.add_param("computed_on", ranking.computed_on);
      m.add_param("variances", ranking.variances);
      m.add_param("order", std::vector<std::int64_t>(ranking.order.begin(), ranking.order.end()));
      m.inputs_digest = Digest().reals(set.values()).hex();
      r.inputs.push_back(input_ref(rank_path));
      std::cerr << "top feature " << ranking.order.front() << " variance " << detail::fmt_g(m.value, 10) << '\n';
      r.reports.push_back(std::move(m));
      emit(r);
    } else if (*is_cmd) {
      auto r = new_report(g, "is");
      const auto m = inception_score(ProbTable::from_rows(read_numeric_rows(is_path, true)));
      r.inputs.push_back(input_ref(is_path));
      print_metric(m);
      r.reports.push_back(m);
      emit(r);
    } else if (*div_cmd) {
      auto r = new_report(g, "div");
      MetricReport m;
      if (div_kind == "kl") {
        m = kl_divergence(DiscreteDist(read_flat_numbers(div_a)), DiscreteDist(read_flat_numbers(div_b)),
                          div_smoothing);
      } else if (div_kind == "js") {
        m = js_divergence(DiscreteDist(read_flat_numbers(div_a)), DiscreteDist(read_flat_numbers(div_b)));
      } else if (div_kind == "w") {
        m = wasserstein_1d(read_weighted(div_a), read_weighted(div_b));
      } else {
        const auto kernel = div_bandwidth ? KernelConfig::rbf(*div_bandwidth) : KernelConfig::median_heuristic();
        m = mmd(load_activations(div_a), load_activations(div_b), kernel,
                div_estimator == "biased" ? MmdEstimator::biased : MmdEstimator::unbiased);
      }
      r.inputs = {input_ref(div_a), input_ref(div_b)};
      print_metric(m);
      r.reports.push_back(std::move(m));
      emit(r);
    } else if (*curve_cmd) {
      auto r = new_report(g, "frechet-curve");
      const auto m = discrete_frechet(Curve::from_points(read_numeric_rows(curve_a, false)),
                                      Curve::from_points(read_numeric_rows(curve_b, false)));
      r.inputs = {input_ref(curve_a), input_ref(curve_b)};
      print_metric(m);
      r.reports.push_back(m);
      emit(r);
    } else if (*monitor_cmd) {
      auto r = new_report(g, "monitor");
      mon_cfg.validate();
      MonitorState state;
      std::vector<PlotPoint> curve;
      auto feed = [&](std::int64_t epoch, double value) {
        state = monitor_update(std::move(state), mon_cfg, epoch, value);
        curve.push_back({static_cast<double>(epoch), value});
      };
      if (!mon_gen.empty()) {
        if (mon_real.empty()) throw ValidationError("--gen requires --real");
        const auto real = load_activations(mon_real);
        const auto spec = mon_k ? SelectionSpec::top_k(*mon_k) : SelectionSpec::all();
        r.inputs.push_back(input_ref(mon_real));
        for (std::size_t i = 0; i < mon_gen.size() && !state.stopped; ++i) {
          auto m = lfid_score(real, load_activations(mon_gen[i]), spec);
          m.add_param("epoch", static_cast<std::int64_t>(i + 1));
          r.inputs.push_back(input_ref(mon_gen[i]));
          feed(static_cast<std::int64_t>(i + 1), m.value);
          r.reports.push_back(std::move(m));
        }
      } else {
        std::string line;
        std::size_t line_no = 0;
        while (!state.stopped && std::getline(std::cin, line)) {
          ++line_no;
          const auto t = detail::trim(line);
          if (t.empty()) continue;
          const auto fields = detail::split(t, ',');
          double epoch = 0.0, value = 0.0;
          if (fields.size() != 2 || !detail::parse_double(fields[0], epoch) ||
              !detail::parse_double(fields[1], value) || epoch != std::floor(epoch)) {
            throw FormatError("stdin line " + std::to_string(line_no) + ": expected 'epoch,lfid'");
          }
          feed(static_cast<std::int64_t>(epoch), value);
        }
      }
      if (!state.history.empty()) {
        MetricReport gate;
        gate.metric_name = "quality_gate";
        gate.value = state.history.back().lfid;
        gate.add_param("epoch", state.history.back().epoch);
        gate.add_param("threshold_T", mon_cfg.gate.threshold);
        gate.add_param("decision", std::string(to_string(quality_gate(gate.value, mon_cfg.gate))));
        r.reports.push_back(std::move(gate));
      }
      if (!mon_plot.empty() && !curve.empty()) {
        emit_plot(curve, mon_plot, {"LFID per epoch", "epoch", "LFID"});
        r.artifacts = {mon_plot, plot_csv_path(mon_plot).string()};
      }
      if (state.stopped) {
        std::cerr << "stopped at epoch " << *state.stop_epoch << '\n';
      } else {
        std::cerr << "not stopped after " << state.history.size() << " epochs\n";
      }
      r.monitor = MonitorSnapshot{mon_cfg, std::move(state)};
      emit(r);
    } else if (*tune_cmd) {
      auto r = new_report(g, "tune");
      const auto grid = load_grid(tune_grid);
      const auto real = load_activations(tune_real);
      const auto spec = tune_k ? SelectionSpec::top_k(*tune_k) : SelectionSpec::all();
      auto result = grid_search(
          grid, [&](const ParamSet& ps) { return run_external_evaluation(tune_cmd_tmpl, ps, real, spec); },
          tune_jobs);
      r.inputs = {input_ref(tune_grid), input_ref(tune_real)};
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      std::cerr << "best LFID " << detail::fmt_g(result.best_lfid, 10) << " at";
      for (const auto& [k, v] : result.best_params) std::cerr << ' ' << k << '=' << v;
      std::cerr << '\n';
      if (!tune_plot.empty()) {
        std::vector<PlotPoint> pts;
        for (std::size_t i = 0; i < result.trace.size(); ++i) {
          pts.push_back({static_cast<double>(i), result.trace[i].lfid});
        }
        emit_plot(pts, tune_plot, {"LFID per grid point", "grid point", "LFID"});
        r.artifacts = {tune_plot, plot_csv_path(tune_plot).string()};
      }
      r.tuning = std::move(result);
      emit(r);
    } else if (*demo_cmd) {
      demo.seed = demo_seed ? *demo_seed : default_seed();
      demo.out_dir = demo_out;
      auto outcome = run_demo_toy(demo);
      outcome.report.timestamp = g.no_timestamp ? std::nullopt : std::optional(utc_timestamp());
      const auto& st = outcome.report.monitor->state;
      std::cerr << "initial LFID " << detail::fmt_g(outcome.initial_lfid, 8) << ", final LFID "
                << detail::fmt_g(outcome.final_lfid, 8) << " after " << st.history.size() << " epochs"
                << (st.stopped ? " (early stop)" : "") << ", gate: " << to_string(outcome.decision) << '\n';
      const auto report_path = fs::path(demo_out) / "report.json";
      outcome.report.artifacts.push_back(report_path.string());
      const auto text = dump_report(outcome.report);
      std::ofstream(report_path) << text << '\n';
      std::cout << text << '\n';
    } else if (*toy_cmd) {
      auto r = new_report(g, "toy-sample");
      const ToyGenerator gen{std::vector<double>(ts_dim, ts_mean), std::vector<double>(ts_dim, std::log(ts_sigma)),
                             0};
      const auto raw = sample_toy(gen, ts_n, ts_seed ? *ts_seed : default_seed());
      const ActivationSet set(raw.n_samples(), raw.dim(), {raw.values().begin(), raw.values().end()}, "toy",
                              ts_source);
      save_activations(set, ts_out);
      r.artifacts.push_back(ts_out);
      std::cerr << "wrote " << ts_n << "x" << ts_dim << " to " << ts_out << '\n';
      emit(r);
    } else if (*report_cmd) {
      const auto parsed = parse_report(detail::read_file(report_path));
      std::cerr << parsed.subcommand << " (genmetric " << parsed.tool_version << ")\n";
      for (const auto& m : parsed.reports) print_metric(m);
      if (parsed.monitor) {
        const auto& st = parsed.monitor->state;
        std::cerr << "monitor: " << st.history.size() << " epochs, "
                  << (st.stopped ? "stopped at " + std::to_string(*st.stop_epoch) : std::string("running")) << '\n';
      }
      if (parsed.tuning) std::cerr << "tuning: best LFID " << detail::fmt_g(parsed.tuning->best_lfid, 10) << '\n';
      emit(parsed);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
