#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace xrsim {

/// Connected-mode DRX timers, milliseconds.
struct DrxConfig {
  bool enabled = false;
  double long_cycle_ms = 10.0;
  double on_duration_ms = 5.0;
  double inactivity_timer_ms = 5.0;

  void validate() const;
  /// "(cycle, on, inactivity)" or "Always-ON".
  std::string label() const;

  static DrxConfig always_on() { return {}; }
  static DrxConfig make(double cycle, double on, double inactivity) {
    return {true, cycle, on, inactivity};
  }
};

/// Parses "cycle,on,inactivity" (milliseconds) or "always-on".
DrxConfig parse_drx(const std::string& text);

struct DrxState {
  /// Start of some DRX cycle; on-durations begin at anchor + k * long_cycle.
  double cycle_anchor_ms = 0.0;
  std::optional<double> inactivity_expiry_ms;

  /// End of the on-duration of the cycle containing `now`.
  double on_duration_expiry(const DrxConfig& cfg, double now_ms) const;
};

/// True when the UE monitors PDCCH at `now` (on-duration or inactivity timer
/// running). Always true with DRX disabled.
bool drx_is_eligible(const DrxConfig& cfg, const DrxState& state, double now_ms);

/// Restarts the inactivity timer for a grant at `now`. Throws
/// InvariantViolation if the UE is asleep.
void drx_on_grant(const DrxConfig& cfg, DrxState& state, double now_ms);

enum class PowerState { pdcch_only, pdsch_rx, pusch_tx, light_sleep, deep_sleep };

inline constexpr std::size_t kPowerStates = 5;

std::string to_string(PowerState s);

/// Relative per-slot power of each state. These magnitudes are configurable
/// defaults, not measured device data.
struct PowerTable {
  double deep_sleep = 1.0;
  double light_sleep = 20.0;
  double pdcch_only = 100.0;
  double pdsch_rx = 300.0;
  double pusch_tx = 250.0;
  /// Sleep stretches at least this long are spent in deep sleep.
  double deep_sleep_threshold_ms = 20.0;

  double power(PowerState s) const;
};

/// What the UE did in an awake slot.
enum class SlotActivity { idle, dl_data, ul_data };

/// State of an awake slot.
PowerState attribute_slot_power(SlotActivity activity);

/// Per-UE energy accounting: every slot lands in exactly one state. A sleep
/// stretch is classified once it ends (or at finish()), by its length.
class PowerLedger {
public:
  explicit PowerLedger(double slot_ms = 0.5, double deep_sleep_threshold_ms = 20.0)
      : slot_ms_(slot_ms), deep_threshold_ms_(deep_sleep_threshold_ms) {}

  void add_awake_slot(SlotActivity activity);
  void add_sleep_slot() { ++pending_sleep_; }
  /// Closes any open sleep stretch.
  void finish();

  std::int64_t slots(PowerState s) const { return counts_[static_cast<std::size_t>(s)]; }
  std::int64_t total_slots() const;
  std::int64_t sleep_slots() const { return slots(PowerState::light_sleep) + slots(PowerState::deep_sleep); }
  std::int64_t awake_slots() const { return total_slots() - sleep_slots(); }
  double energy(const PowerTable& table) const;
  double average_power(const PowerTable& table) const;

private:
  void close_sleep();

  double slot_ms_;
  double deep_threshold_ms_;
  std::int64_t pending_sleep_ = 0;
  std::array<std::int64_t, kPowerStates> counts_{};
};

struct PowerSavingGain {
  double gain_pct = 0.0;
  /// avg_scheme / avg_always_on, as the metric is phrased.
  double ratio = 1.0;
};

/// Throws ConfigError when the Always-ON baseline is not positive.
PowerSavingGain power_saving_gain(double avg_scheme, double avg_always_on);

}  // namespace xrsim
