#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xrsim/cdrx.hpp"
#include "xrsim/config.hpp"
#include "xrsim/deployment.hpp"
#include "xrsim/kpi.hpp"
#include "xrsim/radio.hpp"

namespace xrsim {

/// Geometry, drops, large-scale channel and serving cells of one seed.
struct Scenario {
  Layout layout;
  FrProfile profile;
  std::vector<UserTerminal> ues;
  ChannelMap channel;
};

/// Deterministic in (cfg, seed). UEs are attached to their best-RSRP cell.
Scenario build_scenario(const SimConfig& cfg, std::uint64_t seed);

struct PacketTrace {
  std::uint32_t ue = 0;
  std::uint32_t stream = 0;
  std::uint32_t packet_id = 0;
  std::uint32_t size_bytes = 0;
  double arrival_ms = 0.0;
  std::optional<double> completion_ms;
  bool on_time = false;
  int n_tx = 0;
};

struct StreamBytes {
  std::uint32_t ue = 0;
  std::uint32_t stream = 0;
  std::int64_t generated = 0;
  std::int64_t delivered = 0;
  std::int64_t queued = 0;
  std::int64_t in_flight = 0;
  std::int64_t discarded = 0;

  bool conserved() const { return generated == delivered + queued + in_flight + discarded; }
};

/// Counters for the per-slot discipline checks.
struct MacStats {
  std::int64_t n_slots = 0;
  std::int64_t dl_bytes_in_u_slots = 0;
  std::int64_t ul_bytes_in_d_slots = 0;
  std::int64_t dl_bytes_sent = 0;
  std::int64_t ul_bytes_sent = 0;
  std::int64_t grants_to_sleeping = 0;
  std::int64_t first_transmissions = 0;
  std::int64_t retransmissions = 0;
  std::int64_t harq_exhausted = 0;
  std::vector<StreamBytes> stream_bytes;

  bool bytes_conserved() const;
};

struct UeResult {
  std::uint32_t ue_id = 0;
  std::uint32_t serving_cell = 0;
  bool indoor = true;
  double dl_csi_sinr_db = 0.0;
  UeVerdict verdict;
  std::size_t packets_evaluated = 0;
  std::size_t packets_on_time = 0;
  PowerLedger power;
  double avg_power = 0.0;
};

struct RunResult {
  SimConfig config;
  std::uint64_t seed = 0;
  std::vector<UeResult> ues;
  std::vector<DelayRecord> records;
  std::vector<PacketTrace> traces;
  MacStats stats;
  /// Not part of any result file, so files stay byte-identical across runs.
  double wall_clock_s = 0.0;

  std::size_t on_time_packets() const;
  std::vector<UeVerdict> verdicts() const;
};

/// One full drop: layout, UEs, channel, traffic, slot loop and KPI extraction.
/// Packets count toward KPIs when they arrive after the warm-up and their
/// deadline falls inside the horizon; unfinished ones count as late.
RunResult run_simulation(const SimConfig& cfg, std::uint64_t seed);

// --- sweeps ------------------------------------------------------------------

struct RunSummary {
  int n_per_cell = 0;
  std::uint64_t seed = 0;
  SatisfactionCount all;
  SatisfactionCount dl;
  SatisfactionCount ul;
  std::size_t on_time_packets = 0;
  std::size_t evaluated_packets = 0;
  double avg_power = 0.0;
};

RunSummary summarize(const RunResult& r);

/// Thrown when some (n, seed) runs of a sweep fail; lists them all.
class SweepError : public std::runtime_error {
public:
  SweepError(const std::string& what, std::vector<std::pair<int, std::uint64_t>> failed)
      : std::runtime_error(what), failed_(std::move(failed)) {}
  const std::vector<std::pair<int, std::uint64_t>>& failed() const { return failed_; }

private:
  std::vector<std::pair<int, std::uint64_t>> failed_;
};

struct SweepResult {
  CapacityResult capacity;
  /// Ordered by (n, seed) whatever the execution order.
  std::vector<RunSummary> runs;
};

/// Every (n, seed) pair, on up to `threads` workers (0 = hardware
/// concurrency, 1 = serial), pooled per n and fed to capacity_search.
SweepResult run_sweep(const SimConfig& cfg, const std::vector<int>& n_list,
                      const std::vector<std::uint64_t>& seeds, int threads = 0);

struct PowerStudyRow {
  DrxConfig drx;
  std::string label;
  double avg_power = 0.0;
  PowerSavingGain gain;
  SatisfactionCount all;
  SatisfactionCount dl;
  /// Satisfied fraction minus the Always-ON fraction (all streams).
  double satisfaction_delta = 0.0;
  /// The same over DL streams only.
  double dl_satisfaction_delta = 0.0;
  std::size_t on_time_packets = 0;
  std::optional<CapacityResult> capacity;
};

/// Always-ON plus each DRX config on identical drops and traffic. The first
/// row is always the Always-ON baseline. With `n_list`, capacity is swept
/// per scheme as well.
std::vector<PowerStudyRow> run_power_study(const SimConfig& cfg, const std::vector<DrxConfig>& drx_configs,
                                           const std::vector<std::uint64_t>& seeds, int n_per_cell,
                                           const std::optional<std::vector<int>>& n_list = std::nullopt,
                                           int threads = 0);

/// The named schemes used in the power study: CDRX1 (4,2,2), CDRX2 (10,5,2),
/// CDRX3 (10,5,5), CDRX4 (10,8,2).
std::vector<std::pair<std::string, DrxConfig>> named_drx_schemes();

}  // namespace xrsim
