#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xrsim/cdrx.hpp"
#include "xrsim/deployment.hpp"
#include "xrsim/kpi.hpp"
#include "xrsim/mac.hpp"
#include "xrsim/radio.hpp"
#include "xrsim/traffic.hpp"

namespace xrsim {

/// How DL interference is weighted per interfering cell.
enum class DlInterference {
  /// Cells with a transmission in the slot, scaled by their PRB occupancy.
  active_prb_fraction,
  /// Cells with a transmission in the slot, full band.
  active_full_band,
  /// Every cell, every DL slot.
  full_buffer,
};

std::string to_string(DlInterference m);
DlInterference parse_dl_interference(const std::string& text);

struct ScenarioConfig {
  DeploymentKind deployment = DeploymentKind::DU;
  FrequencyRange fr = FrequencyRange::FR1;
  Service service = Service::VR;
  int n_ue_per_cell = 6;
  bool wraparound = true;
  DropOptions drop;
};

struct TrafficConfig {
  SessionOptions session;
};

struct RadioConfig {
  RadioParams params;
  DlInterference dl_interference = DlInterference::active_prb_fraction;
};

struct MacConfig {
  /// 0 selects the FR default.
  int harq_rtt_slots = 0;
  int max_retx = 3;
  double pf_time_constant_ms = 100.0;
  bool discard_late = false;
  /// Slots between an UL arrival and the scheduler seeing it.
  int ul_bsr_delay_slots = 1;
};

struct SimSection {
  double horizon_s = 6.0;
  double warmup_s = 1.0;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  /// n_ue_per_cell values visited by capacity sweeps.
  std::vector<int> n_list{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 14, 16};
  /// 0 uses the hardware concurrency.
  int threads = 0;
};

struct OutputConfig {
  std::string dir = "results";
  bool packet_trace = false;
  bool link_dump = false;
};

struct SimConfig {
  ScenarioConfig scenario;
  TrafficConfig traffic;
  RadioConfig radio;
  MacConfig mac;
  DrxConfig drx;
  PowerTable power;
  SatisfactionConfig kpi;
  SimSection sim;
  OutputConfig output;

  /// Throws ConfigError listing every offending key.
  void validate() const;

  FrProfile fr_profile() const { return make_fr_profile(scenario.fr, scenario.deployment); }
  HarqConfig harq() const;
  SessionTemplate session_template() const {
    return make_session_template(scenario.service, traffic.session);
  }
};

/// Every configurable key as "section.key".
std::vector<std::string> config_keys();

/// Text form of one key's current value.
std::string config_get(const SimConfig& cfg, const std::string& key);

/// Sets one key from text. Unknown keys and unparsable values throw ConfigError.
void config_set(SimConfig& cfg, const std::string& key, const std::string& value);

/// Applies "section.key=value".
void apply_override(SimConfig& cfg, const std::string& assignment);

/// INI-style file with [section] headers; starts from the defaults.
SimConfig load_config_file(const std::string& path);
SimConfig parse_config_text(const std::string& text);

/// Full INI echo of every key, loadable by load_config_file.
std::string config_to_ini(const SimConfig& cfg);

/// The same content as "# section.key=value" comment lines for CSV headers.
std::string config_header_lines(const SimConfig& cfg, const std::string& prefix = "# ");

}  // namespace xrsim
