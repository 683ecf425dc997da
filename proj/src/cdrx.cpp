#include "xrsim/cdrx.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "xrsim/errors.hpp"

namespace xrsim {

namespace {
// Absorbs rounding when timers land exactly on slot boundaries.
constexpr double kTimeEps = 1e-9;
}  // namespace

void DrxConfig::validate() const {
  if (!enabled) return;
  std::vector<std::string> bad;
  if (!(long_cycle_ms > 0.0)) bad.push_back("drx.long_cycle_ms");
  if (!(on_duration_ms > 0.0) || on_duration_ms > long_cycle_ms) bad.push_back("drx.on_duration_ms");
  if (!(inactivity_timer_ms > 0.0)) bad.push_back("drx.inactivity_timer_ms");
  if (!bad.empty())
    throw ConfigError("DRX timers must be positive with on_duration <= long_cycle", bad);
}

std::string DrxConfig::label() const {
  if (!enabled) return "Always-ON";
  std::ostringstream os;
  os << "CDRX(" << long_cycle_ms << "," << on_duration_ms << "," << inactivity_timer_ms << ")";
  return os.str();
}

DrxConfig parse_drx(const std::string& text) {
  if (text == "always-on" || text == "Always-ON" || text == "off") return DrxConfig::always_on();
  std::istringstream is(text);
  double v[3];
  char sep;
  if (!(is >> v[0] >> sep >> v[1] >> sep >> v[2]))
    throw ConfigError("DRX spec must be 'cycle,on,inactivity' or 'always-on': " + text);
  DrxConfig cfg = DrxConfig::make(v[0], v[1], v[2]);
  cfg.validate();
  return cfg;
}

double DrxState::on_duration_expiry(const DrxConfig& cfg, double now_ms) const {
  const double k = std::floor((now_ms - cycle_anchor_ms) / cfg.long_cycle_ms + kTimeEps);
  return cycle_anchor_ms + k * cfg.long_cycle_ms + cfg.on_duration_ms;
}

bool drx_is_eligible(const DrxConfig& cfg, const DrxState& state, double now_ms) {
  if (!cfg.enabled) return true;
  if (now_ms < state.on_duration_expiry(cfg, now_ms) - kTimeEps) return true;
  return state.inactivity_expiry_ms && now_ms < *state.inactivity_expiry_ms - kTimeEps;
}

void drx_on_grant(const DrxConfig& cfg, DrxState& state, double now_ms) {
  if (!cfg.enabled) return;
  if (!drx_is_eligible(cfg, state, now_ms))
    throw InvariantViolation("grant issued to a DRX-sleeping UE");
  state.inactivity_expiry_ms = now_ms + cfg.inactivity_timer_ms;
}

std::string to_string(PowerState s) {
  switch (s) {
    case PowerState::pdcch_only: return "pdcch_only";
    case PowerState::pdsch_rx: return "pdsch_rx";
    case PowerState::pusch_tx: return "pusch_tx";
    case PowerState::light_sleep: return "light_sleep";
    case PowerState::deep_sleep: return "deep_sleep";
  }
  return "?";
}

double PowerTable::power(PowerState s) const {
  switch (s) {
    case PowerState::pdcch_only: return pdcch_only;
    case PowerState::pdsch_rx: return pdsch_rx;
    case PowerState::pusch_tx: return pusch_tx;
    case PowerState::light_sleep: return light_sleep;
    case PowerState::deep_sleep: return deep_sleep;
  }
  return 0.0;
}

PowerState attribute_slot_power(SlotActivity activity) {
  switch (activity) {
    case SlotActivity::dl_data: return PowerState::pdsch_rx;
    case SlotActivity::ul_data: return PowerState::pusch_tx;
    case SlotActivity::idle: break;
  }
  return PowerState::pdcch_only;
}

void PowerLedger::close_sleep() {
  if (pending_sleep_ == 0) return;
  const double length_ms = static_cast<double>(pending_sleep_) * slot_ms_;
  const PowerState s = length_ms + kTimeEps >= deep_threshold_ms_ ? PowerState::deep_sleep
                                                                  : PowerState::light_sleep;
  counts_[static_cast<std::size_t>(s)] += pending_sleep_;
  pending_sleep_ = 0;
}

void PowerLedger::add_awake_slot(SlotActivity activity) {
  close_sleep();
  ++counts_[static_cast<std::size_t>(attribute_slot_power(activity))];
}

void PowerLedger::finish() { close_sleep(); }

std::int64_t PowerLedger::total_slots() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0}) + pending_sleep_;
}

double PowerLedger::energy(const PowerTable& table) const {
  double e = 0.0;
  for (std::size_t i = 0; i < kPowerStates; ++i)
    e += static_cast<double>(counts_[i]) * table.power(static_cast<PowerState>(i));
  return e;
}

double PowerLedger::average_power(const PowerTable& table) const {
  const auto n = total_slots();
  return n == 0 ? 0.0 : energy(table) / static_cast<double>(n);
}

PowerSavingGain power_saving_gain(double avg_scheme, double avg_always_on) {
  if (!(avg_always_on > 0.0)) throw ConfigError("power saving gain needs a positive Always-ON baseline");
  const double ratio = avg_scheme / avg_always_on;
  return {(1.0 - ratio) * 100.0, ratio};
}

}  // namespace xrsim
