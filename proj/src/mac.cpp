#include "xrsim/mac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "xrsim/errors.hpp"

namespace xrsim {

namespace {

constexpr SlotKind kPattern[5] = {SlotKind::D, SlotKind::D, SlotKind::D, SlotKind::S, SlotKind::U};
constexpr double kPfFloorBps = 1.0;

}  // namespace

SlotKind slot_type(std::int64_t slot_index) {
  std::int64_t m = slot_index % 5;
  if (m < 0) m += 5;
  return kPattern[m];
}

Direction slot_direction(SlotKind kind) { return kind == SlotKind::U ? Direction::UL : Direction::DL; }

std::int64_t next_slot_with_direction(std::int64_t from, Direction dir) {
  std::int64_t s = from;
  while (slot_direction(slot_type(s)) != dir) ++s;
  return s;
}

// --- RlcBuffer ---------------------------------------------------------------

void RlcBuffer::enqueue(const Packet& packet) {
  if (packet.size_bytes == 0) throw ConfigError("zero-byte packet cannot be enqueued");
  if (packet.stream_id >= queues_.size()) throw InvariantViolation("stream index out of range");
  queues_[packet.stream_id].push_back(
      {packet.stream_id, packet.packet_id, packet.size_bytes, packet.deadline_ms});
  total_bytes_ += packet.size_bytes;
}

std::int64_t RlcBuffer::stream_bytes(std::uint32_t stream) const {
  std::int64_t n = 0;
  for (const auto& s : queues_.at(stream)) n += s.bytes;
  return n;
}

std::vector<Segment> RlcBuffer::pull(std::int64_t max_bytes) {
  std::vector<Segment> out;
  while (max_bytes > 0 && total_bytes_ > 0) {
    // Earliest deadline among stream heads; ties to the lower stream index.
    std::size_t best = queues_.size();
    for (std::size_t q = 0; q < queues_.size(); ++q) {
      if (queues_[q].empty()) continue;
      if (best == queues_.size() || queues_[q].front().deadline_ms < queues_[best].front().deadline_ms)
        best = q;
    }
    Segment& head = queues_[best].front();
    const auto take = static_cast<std::uint32_t>(std::min<std::int64_t>(head.bytes, max_bytes));
    out.push_back({head.stream, head.packet, take, head.deadline_ms});
    head.bytes -= take;
    total_bytes_ -= take;
    max_bytes -= take;
    if (head.bytes == 0) queues_[best].pop_front();
  }
  return out;
}

void RlcBuffer::push_front(std::span<const Segment> segments) {
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    auto& q = queues_.at(it->stream);
    if (!q.empty() && q.front().packet == it->packet) {
      q.front().bytes += it->bytes;
    } else {
      q.push_front(*it);
    }
    total_bytes_ += it->bytes;
  }
}

std::vector<Segment> RlcBuffer::discard_expired(double now_ms) {
  std::vector<Segment> dropped;
  for (auto& q : queues_) {
    auto keep = std::stable_partition(q.begin(), q.end(),
                                      [&](const Segment& s) { return !(s.deadline_ms < now_ms); });
    for (auto it = keep; it != q.end(); ++it) {
      dropped.push_back(*it);
      total_bytes_ -= it->bytes;
    }
    q.erase(keep, q.end());
  }
  return dropped;
}

// --- HARQ --------------------------------------------------------------------

int default_harq_rtt_slots(FrequencyRange fr) { return fr == FrequencyRange::FR1 ? 10 : 12; }

HarqResult harq_step(HarqProcess& proc, std::int64_t slot, RngStream& rng,
                     const HarqConfig& harq, const RadioParams& radio) {
  const int attempt = proc.attempts;
  ++proc.attempts;
  if (attempt > harq.max_retx) throw InvariantViolation("HARQ attempt beyond max retransmissions");
  if (tx_outcome(rng, attempt, radio)) return HarqResult::delivered;
  if (proc.attempts > harq.max_retx) return HarqResult::exhausted;
  proc.next_retx_slot = next_slot_with_direction(slot + harq.rtt_slots, proc.direction);
  return HarqResult::retx_scheduled;
}

// --- PF ----------------------------------------------------------------------

PfState::PfState(std::size_t n_ues, double tc_ms) : time_constant_ms(tc_ms), avg_bps(n_ues, initial_bps) {}

void PfState::update(std::size_t ue, std::int64_t served_bits, double slot_ms) {
  const double tau_slots = std::max(1.0, time_constant_ms / slot_ms);
  const double rate = static_cast<double>(served_bits) / (slot_ms * 1e-3);
  double& t = avg_bps[ue];
  t = (1.0 - 1.0 / tau_slots) * t + rate / tau_slots;
  t = std::max(t, kPfFloorBps);
}

std::vector<Allocation> pf_schedule(std::span<const PfCandidate> candidates, int n_prb_available,
                                    const PfState& pf, int n_prb_total) {
  struct Ranked {
    const PfCandidate* c;
    double metric;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(candidates.size());
  for (const auto& c : candidates) {
    if (c.need_bits <= 0) continue;
    const double r = static_cast<double>(c.tb_bits(n_prb_total));
    if (r <= 0.0) continue;
    ranked.push_back({&c, r / pf.avg_bps.at(c.ue)});
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.metric != b.metric) return a.metric > b.metric;
    return a.c->ue_id < b.c->ue_id;
  });

  std::vector<Allocation> out;
  int remaining = n_prb_available;
  for (const auto& r : ranked) {
    if (remaining <= 0) break;
    const PfCandidate& c = *r.c;
    int n = remaining;
    if (c.tb_bits(remaining) > c.need_bits) {
      // Smallest n with tb_bits(n) >= need.
      int lo = 1;
      int hi = remaining;
      while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (c.tb_bits(mid) >= c.need_bits)
          hi = mid;
        else
          lo = mid + 1;
      }
      n = lo;
    }
    const std::int64_t bits = c.tb_bits(n);
    if (bits <= 0) continue;
    out.push_back({c.ue, n, bits});
    remaining -= n;
  }
  return out;
}

DelayRecord complete_packet(const Packet& packet, const StreamConfig& stream, double completion_ms) {
  DelayRecord r;
  r.ue = packet.ue_id;
  r.stream = packet.stream_id;
  r.packet_id = packet.packet_id;
  r.arrival_ms = packet.arrival_ms;
  r.delay_ms = completion_ms - packet.arrival_ms;
  r.on_time = r.delay_ms <= stream.pdb_ms + 1e-9;
  r.direction = stream.direction;
  r.kind = stream.kind;
  return r;
}

}  // namespace xrsim
