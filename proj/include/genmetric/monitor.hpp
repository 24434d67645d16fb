#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "genmetric/errors.hpp"
#include "genmetric/lfid.hpp"

namespace genmetric {

struct MonitorConfig {
  double epsilon = 0.5;
  std::int64_t patience = 1;
  std::int64_t min_epochs = 2;
  GateConfig gate;

  void validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be positive");
    if (patience < 1) throw ValidationError("patience must be >= 1");
    if (min_epochs < 2) throw ValidationError("min_epochs must be >= 2");
    if (!(gate.threshold > 0.0)) throw ValidationError("gate threshold must be positive");
  }
};

struct EpochScore {
  std::int64_t epoch;
  double lfid;
  bool operator==(const EpochScore&) const = default;
};

/// Early-stopping state: stop once |LFID_i - LFID_{i-1}| < epsilon has held
/// for `patience` consecutive updates at epochs >= min_epochs.
struct MonitorState {
  std::vector<EpochScore> history;
  bool stopped = false;
  std::optional<std::int64_t> stop_epoch;
  std::int64_t qualifying_streak = 0;

  bool operator==(const MonitorState&) const = default;
};

/// Returns the state after recording `lfid` for `epoch`.
inline MonitorState monitor_update(MonitorState state, const MonitorConfig& config, std::int64_t epoch,
                                   double lfid) {
  config.validate();
  if (state.stopped) throw StateError("monitor already stopped at epoch " + std::to_string(*state.stop_epoch));
  if (!std::isfinite(lfid) || lfid < 0.0) throw ValidationError("LFID must be finite and non-negative");
  if (!state.history.empty() && epoch <= state.history.back().epoch) {
    throw SequenceError("epoch " + std::to_string(epoch) + " does not follow " +
                        std::to_string(state.history.back().epoch));
  }

  const bool qualifies = !state.history.empty() && epoch >= config.min_epochs &&
                         std::abs(lfid - state.history.back().lfid) < config.epsilon;
  state.history.push_back({epoch, lfid});
  state.qualifying_streak = qualifies ? state.qualifying_streak + 1 : 0;
  if (state.qualifying_streak >= config.patience) {
    state.stopped = true;
    state.stop_epoch = epoch;
  }
  return state;
}

}  // namespace genmetric
