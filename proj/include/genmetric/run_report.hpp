#pragma once

// RunReport: the JSON document every CLI subcommand prints. The schema lives in
// docs/run_report.schema.json. Non-finite reals are written as the strings
// "inf", "-inf" or "nan" since JSON has no spelling for them.

#include <chrono>
#include <cmath>
#include <ctime>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "genmetric/metric_report.hpp"
#include "genmetric/monitor.hpp"
#include "genmetric/tuning.hpp"

namespace genmetric {

inline constexpr const char* kToolVersion = "0.1.0";

struct InputRef {
  std::string path;
  std::string digest;
  bool operator==(const InputRef&) const = default;
};

struct MonitorSnapshot {
  MonitorConfig config;
  MonitorState state;
};

struct RunReport {
  std::string tool_version = kToolVersion;
  std::optional<std::string> timestamp;
  std::string subcommand;
  std::vector<InputRef> inputs;
  std::vector<MetricReport> reports;
  std::optional<MonitorSnapshot> monitor;
  std::optional<TuningResult> tuning;
  std::vector<std::string> artifacts;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace json_detail {

using nlohmann::json;

inline json real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double real_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw FormatError("bad real literal '" + s + "'");
  }
  return j.get<double>();
}

inline json param_to_json(const std::string& name, const ParamValue& v) {
  json out{{"name", name}};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          out["type"] = "real";
          out["value"] = real(x);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          out["type"] = "int";
          out["value"] = x;
        } else if constexpr (std::is_same_v<T, std::string>) {
          out["type"] = "string";
          out["value"] = x;
        } else if constexpr (std::is_same_v<T, std::vector<double>>) {
          out["type"] = "reals";
          json arr = json::array();
          for (double e : x) arr.push_back(real(e));
          out["value"] = std::move(arr);
        } else {
          out["type"] = "ints";
          out["value"] = x;
        }
      },
      v);
  return out;
}

inline std::pair<std::string, ParamValue> param_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  const auto& v = j.at("value");
  ParamValue pv;
  if (type == "real") {
    pv = real_from(v);
  } else if (type == "int") {
    pv = v.get<std::int64_t>();
  } else if (type == "string") {
    pv = v.get<std::string>();
  } else if (type == "reals") {
    std::vector<double> xs;
    for (const auto& e : v) xs.push_back(real_from(e));
    pv = std::move(xs);
  } else if (type == "ints") {
    pv = v.get<std::vector<std::int64_t>>();
  } else {
    throw FormatError("unknown parameter type '" + type + "'");
  }
  return {j.at("name").get<std::string>(), std::move(pv)};
}

inline json params_to_json(const ParamSet& ps) {
  json arr = json::array();
  for (const auto& [k, v] : ps) arr.push_back({{"name", k}, {"value", v}});
  return arr;
}

inline ParamSet params_from_json(const json& j) {
  ParamSet ps;
  for (const auto& e : j) ps.emplace_back(e.at("name").get<std::string>(), e.at("value").get<std::string>());
  return ps;
}

}  // namespace json_detail

inline nlohmann::json to_json(const MetricReport& r) {
  using namespace json_detail;
  json params = json::array();
  for (const auto& [k, v] : r.params) params.push_back(param_to_json(k, v));
  return {{"metric_name", r.metric_name},
          {"value", real(r.value)},
          {"params", std::move(params)},
          {"warnings", r.warnings},
          {"inputs_digest", r.inputs_digest}};
}

inline MetricReport metric_report_from_json(const nlohmann::json& j) {
  using namespace json_detail;
  MetricReport r;
  r.metric_name = j.at("metric_name").get<std::string>();
  r.value = real_from(j.at("value"));
  for (const auto& p : j.at("params")) r.params.push_back(param_from_json(p));
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  r.inputs_digest = j.at("inputs_digest").get<std::string>();
  return r;
}

inline nlohmann::json to_json(const MonitorSnapshot& m) {
  using namespace json_detail;
  json history = json::array();
  for (const auto& h : m.state.history) history.push_back({{"epoch", h.epoch}, {"lfid", real(h.lfid)}});
  return {{"config",
           {{"epsilon", m.config.epsilon},
            {"patience", m.config.patience},
            {"min_epochs", m.config.min_epochs},
            {"threshold", m.config.gate.threshold}}},
          {"history", std::move(history)},
          {"stopped", m.state.stopped},
          {"stop_epoch", m.state.stop_epoch ? json(*m.state.stop_epoch) : json(nullptr)},
          {"qualifying_streak", m.state.qualifying_streak}};
}

inline MonitorSnapshot monitor_from_json(const nlohmann::json& j) {
  using namespace json_detail;
  MonitorSnapshot m;
  const auto& c = j.at("config");
  m.config.epsilon = c.at("epsilon").get<double>();
  m.config.patience = c.at("patience").get<std::int64_t>();
  m.config.min_epochs = c.at("min_epochs").get<std::int64_t>();
  m.config.gate.threshold = c.at("threshold").get<double>();
  for (const auto& h : j.at("history")) {
    m.state.history.push_back({h.at("epoch").get<std::int64_t>(), real_from(h.at("lfid"))});
  }
  m.state.stopped = j.at("stopped").get<bool>();
  if (!j.at("stop_epoch").is_null()) m.state.stop_epoch = j.at("stop_epoch").get<std::int64_t>();
  m.state.qualifying_streak = j.at("qualifying_streak").get<std::int64_t>();
  return m;
}

inline nlohmann::json to_json(const TuningResult& t) {
  using namespace json_detail;
  json trace = json::array();
  for (const auto& e : t.trace) {
    trace.push_back({{"params", params_to_json(e.params)}, {"lfid", real(e.lfid)}, {"kept", e.kept}});
  }
  return {{"best_params", params_to_json(t.best_params)},
          {"best_lfid", real(t.best_lfid)},
          {"points_total", t.points_total},
          {"trace", std::move(trace)},
          {"warnings", t.warnings}};
}

inline TuningResult tuning_from_json(const nlohmann::json& j) {
  using namespace json_detail;
  TuningResult t;
  t.best_params = params_from_json(j.at("best_params"));
  t.best_lfid = real_from(j.at("best_lfid"));
  t.points_total = j.at("points_total").get<std::size_t>();
  for (const auto& e : j.at("trace")) {
    t.trace.push_back({params_from_json(e.at("params")), real_from(e.at("lfid")), e.at("kept").get<bool>()});
  }
  t.warnings = j.at("warnings").get<std::vector<std::string>>();
  return t;
}

inline nlohmann::json to_json(const RunReport& r) {
  using nlohmann::json;
  json inputs = json::array();
  for (const auto& in : r.inputs) inputs.push_back({{"path", in.path}, {"digest", in.digest}});
  json reports = json::array();
  for (const auto& m : r.reports) reports.push_back(to_json(m));
  return {{"tool_version", r.tool_version},
          {"timestamp", r.timestamp ? json(*r.timestamp) : json(nullptr)},
          {"subcommand", r.subcommand},
          {"inputs", std::move(inputs)},
          {"reports", std::move(reports)},
          {"monitor", r.monitor ? to_json(*r.monitor) : json(nullptr)},
          {"tuning", r.tuning ? to_json(*r.tuning) : json(nullptr)},
          {"artifacts", r.artifacts}};
}

inline RunReport run_report_from_json(const nlohmann::json& j) {
  RunReport r;
  try {
    r.tool_version = j.at("tool_version").get<std::string>();
    if (!j.at("timestamp").is_null()) r.timestamp = j.at("timestamp").get<std::string>();
    r.subcommand = j.at("subcommand").get<std::string>();
    for (const auto& in : j.at("inputs")) {
      r.inputs.push_back({in.at("path").get<std::string>(), in.at("digest").get<std::string>()});
    }
    for (const auto& m : j.at("reports")) r.reports.push_back(metric_report_from_json(m));
    if (!j.at("monitor").is_null()) r.monitor = monitor_from_json(j.at("monitor"));
    if (!j.at("tuning").is_null()) r.tuning = tuning_from_json(j.at("tuning"));
    r.artifacts = j.at("artifacts").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed run report: ") + e.what());
  }
  return r;
}

inline std::string dump_report(const RunReport& r, int indent = 2) { return to_json(r).dump(indent); }

inline RunReport parse_report(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("report is not valid JSON: ") + e.what());
  }
  return run_report_from_json(j);
}

}  // namespace genmetric
