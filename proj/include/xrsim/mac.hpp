#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "xrsim/kpi.hpp"
#include "xrsim/radio.hpp"
#include "xrsim/stochastics.hpp"
#include "xrsim/traffic.hpp"

namespace xrsim {

// --- Frame structure ---------------------------------------------------------

/// DDDSU, repeating every 5 slots.
SlotKind slot_type(std::int64_t slot_index);

/// Direction carried by a slot: D and S carry DL, U carries UL.
Direction slot_direction(SlotKind kind);

struct SlotClock {
  double slot_ms = 0.5;

  SlotKind type(std::int64_t slot) const { return slot_type(slot); }
  double start_ms(std::int64_t slot) const { return static_cast<double>(slot) * slot_ms; }
  double end_ms(std::int64_t slot) const { return static_cast<double>(slot + 1) * slot_ms; }
};

/// First slot >= `from` whose direction is `dir`.
std::int64_t next_slot_with_direction(std::int64_t from, Direction dir);

// --- PDCP/RLC buffering ------------------------------------------------------

/// A piece of one packet carried by a transport block or waiting in a buffer.
struct Segment {
  std::uint32_t stream = 0;
  std::uint32_t packet = 0;
  std::uint32_t bytes = 0;
  double deadline_ms = 0.0;
};

/// Per-(UE, direction) transmit queue: one FIFO per stream, drained earliest
/// deadline first across streams.
class RlcBuffer {
public:
  RlcBuffer() = default;
  explicit RlcBuffer(std::size_t n_streams) : queues_(n_streams) {}

  /// Throws ConfigError for zero-byte packets.
  void enqueue(const Packet& packet);
  std::int64_t total_bytes() const { return total_bytes_; }
  bool empty() const { return total_bytes_ == 0; }
  std::int64_t stream_bytes(std::uint32_t stream) const;

  /// Removes up to `max_bytes`, splitting the last packet if needed.
  std::vector<Segment> pull(std::int64_t max_bytes);
  /// Puts segments back at the head of their stream queues, preserving the
  /// original order of `segments`.
  void push_front(std::span<const Segment> segments);
  /// Drops the queued bytes of every packet whose deadline is before
  /// `now_ms`; returns what was removed.
  std::vector<Segment> discard_expired(double now_ms);

  const std::deque<Segment>& queue(std::uint32_t stream) const { return queues_.at(stream); }

private:
  std::vector<std::deque<Segment>> queues_;
  std::int64_t total_bytes_ = 0;
};

// --- HARQ --------------------------------------------------------------------

struct HarqConfig {
  int rtt_slots = 10;
  int max_retx = 3;
};

/// Default HARQ round trip: one DDDSU period plus processing.
int default_harq_rtt_slots(FrequencyRange fr);

struct HarqProcess {
  std::uint32_t ue = 0;
  Direction direction = Direction::DL;
  std::int64_t tb_bits = 0;
  int n_prb = 0;
  /// Transmissions made so far (first transmission included).
  int attempts = 0;
  std::int64_t next_retx_slot = 0;
  std::vector<Segment> payload;
};

enum class HarqResult { delivered, retx_scheduled, exhausted };

/// Resolves the transmission that `proc` just made in `slot`. On failure the
/// retransmission goes to the first same-direction slot >= slot + RTT; after
/// `max_retx` failed retransmissions the caller re-enqueues the payload.
HarqResult harq_step(HarqProcess& proc, std::int64_t slot, RngStream& rng,
                     const HarqConfig& harq, const RadioParams& radio);

// --- Proportional fair scheduling -------------------------------------------

struct PfState {
  double time_constant_ms = 100.0;
  double initial_bps = 1.0e3;
  std::vector<double> avg_bps;

  PfState() = default;
  PfState(std::size_t n_ues, double time_constant_ms);

  /// EWMA update with the bits served to `ue` in a slot of `slot_ms`.
  void update(std::size_t ue, std::int64_t served_bits, double slot_ms);
};

struct PfCandidate {
  std::size_t ue = 0;
  std::uint32_t ue_id = 0;
  std::int64_t need_bits = 0;
  /// Transport block size for an allocation of n PRBs in this slot; must be
  /// non-decreasing in n.
  std::function<std::int64_t(int)> tb_bits;
};

struct Allocation {
  std::size_t ue = 0;
  int n_prb = 0;
  std::int64_t tb_bits = 0;
};

/// Ranks candidates by achievable full-band rate over average throughput
/// (ties to the lower ue_id) and grants each, in order, the fewest PRBs that
/// cover its need, until the PRBs run out.
std::vector<Allocation> pf_schedule(std::span<const PfCandidate> candidates, int n_prb_available,
                                    const PfState& pf, int n_prb_total);

// --- Delivery ----------------------------------------------------------------

/// Delay bookkeeping for a packet whose last byte arrived at `completion_ms`.
/// The budget is inclusive: delay == PDB is on time.
DelayRecord complete_packet(const Packet& packet, const StreamConfig& stream, double completion_ms);

}  // namespace xrsim
