#pragma once

#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <future>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genmetric/actb.hpp"
#include "genmetric/errors.hpp"

namespace genmetric {

using ParamSet = std::vector<std::pair<std::string, std::string>>;

struct TuningParameter {
  std::string name;
  std::vector<std::string> values;
};

/// Ordered parameters with ordered candidate values. Iteration is
/// lexicographic: the first parameter varies slowest.
class TuningGrid {
 public:
  explicit TuningGrid(std::vector<TuningParameter> params) : params_(std::move(params)) {
    if (params_.empty()) throw ValidationError("tuning grid has no parameters");
    std::set<std::string> seen;
    for (const auto& p : params_) {
      if (p.name.empty()) throw ValidationError("tuning parameter with empty name");
      if (p.values.empty()) throw ValidationError("parameter '" + p.name + "' has no candidates");
      if (!seen.insert(p.name).second) throw ValidationError("duplicate parameter '" + p.name + "'");
    }
  }

  const std::vector<TuningParameter>& parameters() const noexcept { return params_; }

  std::size_t size() const noexcept {
    std::size_t n = 1;
    for (const auto& p : params_) n *= p.values.size();
    return n;
  }

  /// The index-th point in lexicographic order.
  ParamSet point(std::size_t index) const {
    ParamSet out(params_.size());
    for (std::size_t k = params_.size(); k-- > 0;) {
      const auto& p = params_[k];
      out[k] = {p.name, p.values[index % p.values.size()]};
      index /= p.values.size();
    }
    return out;
  }

 private:
  std::vector<TuningParameter> params_;
};

/// Grid document: one `name = v1, v2, v3` per line; blank lines and `#`
/// comments are ignored.
inline TuningGrid parse_grid(std::string_view text) {
  std::vector<TuningParameter> params;
  std::size_t line_no = 0;
  for (auto line : detail::split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("grid line " + std::to_string(line_no) + " has no '='");
    }
    TuningParameter p{std::string(detail::trim(line.substr(0, eq))), {}};
    for (auto v : detail::split(line.substr(eq + 1), ',')) {
      v = detail::trim(v);
      if (v.empty()) throw FormatError("grid line " + std::to_string(line_no) + " has an empty value");
      p.values.emplace_back(v);
    }
    params.push_back(std::move(p));
  }
  return TuningGrid(std::move(params));
}

inline TuningGrid load_grid(const std::filesystem::path& path) { return parse_grid(detail::read_file(path)); }

struct TuningTraceEntry {
  ParamSet params;
  double lfid = 0.0;
  bool kept = false;
};

struct TuningResult {
  ParamSet best_params;
  double best_lfid = 0.0;
  std::vector<TuningTraceEntry> trace;
  std::vector<std::string> warnings;
  std::size_t points_total = 0;
};

using Evaluator = std::function<double(const ParamSet&)>;

/// Exhaustive search keeping a point only when it strictly beats the running
/// best. Failed points (throwing or non-finite) are skipped with a warning.
/// With jobs > 1 points are evaluated concurrently in blocks and folded in
/// grid order, so the result does not depend on `jobs`.
inline TuningResult grid_search(const TuningGrid& grid, const Evaluator& evaluator, unsigned jobs = 1) {
  if (jobs == 0) jobs = 1;
  struct Outcome {
    std::optional<double> value;
    std::string error;
  };
  auto evaluate = [&](const ParamSet& ps) -> Outcome {
    try {
      const double v = evaluator(ps);
      if (!std::isfinite(v)) return {std::nullopt, "non-finite LFID"};
      return {v, {}};
    } catch (const std::exception& e) {
      return {std::nullopt, e.what()};
    }
  };

  TuningResult result;
  result.points_total = grid.size();
  std::optional<double> best;
  auto fold = [&](const ParamSet& ps, const Outcome& o) {
    if (!o.value) {
      std::string desc;
      for (const auto& [k, v] : ps) desc += (desc.empty() ? "" : ",") + k + "=" + v;
      result.warnings.push_back("skipped " + desc + ": " + o.error);
      return;
    }
    const bool kept = !best || *o.value < *best;
    if (kept) {
      best = *o.value;
      result.best_params = ps;
    }
    result.trace.push_back({ps, *o.value, kept});
  };

  const std::size_t total = grid.size();
  for (std::size_t start = 0; start < total; start += jobs) {
    const std::size_t stop = std::min(total, start + jobs);
    if (jobs == 1) {
      const auto ps = grid.point(start);
      fold(ps, evaluate(ps));
      continue;
    }
    std::vector<std::future<Outcome>> pending;
    for (std::size_t i = start; i < stop; ++i) {
      pending.push_back(std::async(std::launch::async, [&, i] { return evaluate(grid.point(i)); }));
    }
    for (std::size_t i = start; i < stop; ++i) fold(grid.point(i), pending[i - start].get());
  }

  if (!best) throw TuningError("all " + std::to_string(total) + " grid evaluations failed");
  result.best_lfid = *best;
  return result;
}

}  // namespace genmetric
