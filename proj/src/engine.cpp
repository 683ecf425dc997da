#include "xrsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "xrsim/errors.hpp"
#include "xrsim/mac.hpp"

namespace xrsim {

namespace {

constexpr std::size_t kDl = 0;
constexpr std::size_t kUl = 1;

std::size_t dir_index(Direction d) { return d == Direction::DL ? kDl : kUl; }

// Runs f(i) for i in [0, n) on up to `threads` workers and returns the
// indices that threw, with their messages.
template <typename F>
std::vector<std::pair<std::size_t, std::string>> parallel_for(std::size_t n, int threads, F&& f) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));

  std::vector<std::pair<std::size_t, std::string>> failures;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        f(i);
      } catch (const std::exception& e) {
        std::lock_guard lock(mu);
        failures.emplace_back(i, e.what());
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  std::sort(failures.begin(), failures.end());
  return failures;
}

RngStream ue_stream(const RngStream& root, RngPurpose purpose, const UserTerminal& ue) {
  return root.derive(make_stream_id({static_cast<std::uint64_t>(purpose), ue.drop_cell, ue.drop_index}));
}

struct UeCtx {
  std::size_t serving = 0;
  std::vector<std::vector<Packet>> packets;
  std::vector<std::size_t> next_arrival;
  RlcBuffer buf[2];
  std::vector<std::vector<std::uint32_t>> unacked;
  std::vector<std::vector<double>> completion;
  std::vector<std::vector<int>> n_tx;
  std::vector<std::int64_t> generated;
  std::vector<std::int64_t> delivered;
  std::vector<std::int64_t> discarded;
  DrxState drx;
  PowerLedger ledger;
  RngStream harq_rng{0, 0};
  double dl_sinr_db = 0.0;
  double serving_gain_db = 0.0;
};

struct Tx {
  std::size_t cell = 0;
  HarqProcess proc;
  double ul_power_prb_mw = 0.0;
};

}  // namespace

bool MacStats::bytes_conserved() const {
  return std::all_of(stream_bytes.begin(), stream_bytes.end(),
                     [](const StreamBytes& s) { return s.conserved(); });
}

std::size_t RunResult::on_time_packets() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const DelayRecord& r) { return r.on_time; }));
}

std::vector<UeVerdict> RunResult::verdicts() const {
  std::vector<UeVerdict> v;
  v.reserve(ues.size());
  for (const auto& u : ues) v.push_back(u.verdict);
  return v;
}

Scenario build_scenario(const SimConfig& cfg, std::uint64_t seed) {
  Scenario sc;
  sc.layout = build_layout(cfg.scenario.deployment, LayoutOptions{cfg.scenario.wraparound});
  sc.profile = cfg.fr_profile();
  const RngStream root(seed, 0);
  sc.ues = drop_users(sc.layout, cfg.scenario.n_ue_per_cell, root, cfg.scenario.drop);
  sc.channel = ChannelMap(sc.layout, sc.ues, sc.profile, cfg.radio.params, root);
  for (std::size_t u = 0; u < sc.ues.size(); ++u)
    sc.ues[u].serving_cell = select_cell(rsrp_vector(sc.channel, u, sc.profile));
  return sc;
}

RunResult run_simulation(const SimConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const auto wall_start = std::chrono::steady_clock::now();

  RunResult res;
  res.config = cfg;
  res.seed = seed;

  const Scenario sc = build_scenario(cfg, seed);
  const FrProfile& prof = sc.profile;
  const RadioParams& radio = cfg.radio.params;
  const HarqConfig harq = cfg.harq();
  const SessionTemplate tmpl = cfg.session_template();
  const RngStream root(seed, 0);

  const std::size_t n_cells = sc.layout.cells.size();
  const std::size_t n_ues = sc.ues.size();
  const int n_prb = prof.n_prb;
  const double slot_ms = prof.slot_ms;
  const double horizon_ms = cfg.sim.horizon_s * 1000.0;
  const double warmup_ms = cfg.sim.warmup_s * 1000.0;
  const auto n_slots = static_cast<std::int64_t>(std::llround(horizon_ms / slot_ms));
  const auto csi_slots = std::max<std::int64_t>(1, std::llround(radio.csi_period_ms / slot_ms));
  const double bsr_delay_ms = cfg.mac.ul_bsr_delay_slots * slot_ms;

  const double beam_db = radio.beam_gain_db(prof.fr);
  const double ifactor = radio.interference_factor(prof.fr);
  const double dl_prb_mw = db_to_linear(prof.bs_tx_power_dbm - linear_to_db(n_prb));
  const double ue_noise_mw = db_to_linear(noise_dbm(prof.prb_bandwidth_hz(), prof.ue_noise_figure_db));
  const double bs_noise_mw = db_to_linear(noise_dbm(prof.prb_bandwidth_hz(), prof.bs_noise_figure_db));

  // Linear coupling gain, [ue][cell].
  std::vector<double> gain(n_ues * n_cells);
  for (std::size_t u = 0; u < n_ues; ++u)
    for (std::size_t c = 0; c < n_cells; ++c) gain[u * n_cells + c] = db_to_linear(sc.channel.coupling_db(c, u));

  std::vector<std::vector<std::size_t>> cell_ues(n_cells);
  std::vector<UeCtx> ues(n_ues);
  for (std::size_t u = 0; u < n_ues; ++u) {
    const UserTerminal& t = sc.ues[u];
    UeCtx& x = ues[u];
    x.serving = t.serving_cell;
    cell_ues[x.serving].push_back(u);
    x.packets = generate_session(tmpl, t.ue_id, ue_stream(root, RngPurpose::traffic, t), horizon_ms);
    const std::size_t ns = tmpl.streams.size();
    x.next_arrival.assign(ns, 0);
    x.buf[kDl] = RlcBuffer(ns);
    x.buf[kUl] = RlcBuffer(ns);
    x.unacked.resize(ns);
    x.completion.resize(ns);
    x.n_tx.resize(ns);
    x.generated.assign(ns, 0);
    x.delivered.assign(ns, 0);
    x.discarded.assign(ns, 0);
    for (std::size_t s = 0; s < ns; ++s) {
      for (const auto& p : x.packets[s]) x.unacked[s].push_back(p.size_bytes);
      x.completion[s].assign(x.packets[s].size(), std::numeric_limits<double>::quiet_NaN());
      x.n_tx[s].assign(x.packets[s].size(), 0);
    }
    if (cfg.drx.enabled) {
      RngStream r = ue_stream(root, RngPurpose::drx, t);
      x.drx.cycle_anchor_ms = r.uniform() * cfg.drx.long_cycle_ms;
    }
    x.ledger = PowerLedger(slot_ms, cfg.power.deep_sleep_threshold_ms);
    x.harq_rng = ue_stream(root, RngPurpose::harq, t);
    x.serving_gain_db = sc.channel.coupling_db(x.serving, u) + beam_db;

    // Until the first CSI report, assume every other cell is transmitting.
    double interf = 0.0;
    for (std::size_t c = 0; c < n_cells; ++c)
      if (c != x.serving) interf += dl_prb_mw * gain[u * n_cells + c] * ifactor;
    x.dl_sinr_db = linear_to_db(dl_prb_mw * db_to_linear(x.serving_gain_db) / (interf + ue_noise_mw));
  }

  // UL interference per PRB at each cell, from the latest UL CSI instant.
  std::vector<double> ul_interf_mw(n_cells, 0.0);
  auto ul_power_prb_dbm = [&](std::size_t u, int n) {
    const double pl = -sc.channel.coupling_db(ues[u].serving, u);
    return std::min(radio.ul_p0_dbm_per_prb + radio.ul_alpha * pl,
                    prof.ue_tx_power_dbm - linear_to_db(static_cast<double>(n)));
  };
  auto ul_sinr_db = [&](std::size_t u, int n) {
    const UeCtx& x = ues[u];
    return ul_power_prb_dbm(u, n) + x.serving_gain_db - linear_to_db(ul_interf_mw[x.serving] + bs_noise_mw);
  };

  PfState pf[2] = {PfState(n_ues, cfg.mac.pf_time_constant_ms), PfState(n_ues, cfg.mac.pf_time_constant_ms)};
  std::vector<std::vector<HarqProcess>> retx(n_cells);
  std::vector<char> eligible(n_ues, 1);
  std::vector<char> granted(n_ues, 0);
  std::vector<std::int64_t> served_bits(n_ues, 0);
  std::vector<int> cell_prbs(n_cells, 0);
  std::vector<Tx> txs;
  std::vector<PfCandidate> cands;
  bool dl_csi_due = true;
  bool ul_csi_due = true;

  MacStats& st = res.stats;
  st.n_slots = n_slots;

  for (std::int64_t s = 0; s < n_slots; ++s) {
    const double t0 = static_cast<double>(s) * slot_ms;
    const double t1 = t0 + slot_ms;
    const SlotKind kind = slot_type(s);
    const Direction dir = slot_direction(kind);
    const std::size_t d = dir_index(dir);
    if (s % csi_slots == 0) dl_csi_due = ul_csi_due = true;

    // Arrivals: DL data is schedulable from the first slot boundary at or
    // after arrival; UL data becomes visible one BSR delay later.
    for (auto& x : ues) {
      for (std::size_t k = 0; k < tmpl.streams.size(); ++k) {
        const std::size_t bd = dir_index(tmpl.streams[k].direction);
        const double visible_before = bd == kDl ? t0 : t0 - bsr_delay_ms;
        auto& idx = x.next_arrival[k];
        while (idx < x.packets[k].size() && x.packets[k][idx].arrival_ms <= visible_before + 1e-9) {
          x.buf[bd].enqueue(x.packets[k][idx]);
          x.generated[k] += x.packets[k][idx].size_bytes;
          ++idx;
        }
      }
      if (cfg.mac.discard_late) {
        for (auto& b : x.buf)
          for (const auto& seg : b.discard_expired(t1 - 1e-9)) x.discarded[seg.stream] += seg.bytes;
      }
    }

    // DRX eligibility at the slot start.
    for (std::size_t u = 0; u < n_ues; ++u) eligible[u] = drx_is_eligible(cfg.drx, ues[u].drx, t0) ? 1 : 0;

    // Scheduling: pending retransmissions first, then PF over new data.
    txs.clear();
    std::fill(granted.begin(), granted.end(), 0);
    std::fill(cell_prbs.begin(), cell_prbs.end(), 0);
    for (std::size_t c = 0; c < n_cells; ++c) {
      int remaining = n_prb;
      auto& pend = retx[c];
      for (auto it = pend.begin(); it != pend.end();) {
        if (it->direction == dir && it->next_retx_slot <= s && eligible[it->ue] && it->n_prb <= remaining) {
          remaining -= it->n_prb;
          granted[it->ue] = 1;
          txs.push_back({c, std::move(*it), 0.0});
          it = pend.erase(it);
        } else {
          ++it;
        }
      }

      cands.clear();
      for (std::size_t u : cell_ues[c]) {
        if (!eligible[u]) continue;
        const std::int64_t need = ues[u].buf[d].total_bytes() * 8;
        if (need <= 0) continue;
        PfCandidate pc;
        pc.ue = u;
        pc.ue_id = sc.ues[u].ue_id;
        pc.need_bits = need;
        if (dir == Direction::DL) {
          const double se = spectral_efficiency(ues[u].dl_sinr_db, radio.eta, radio.se_max);
          pc.tb_bits = [&, se](int n) { return transport_block_bits(se, n, prof, kind, radio); };
        } else {
          pc.tb_bits = [&, u](int n) {
            const double se = spectral_efficiency(ul_sinr_db(u, n), radio.eta, radio.se_max);
            return transport_block_bits(se, n, prof, kind, radio);
          };
        }
        cands.push_back(std::move(pc));
      }
      for (const Allocation& a : pf_schedule(cands, remaining, pf[d], n_prb)) {
        UeCtx& x = ues[a.ue];
        const std::int64_t bytes = std::min<std::int64_t>(a.tb_bits / 8, x.buf[d].total_bytes());
        if (bytes <= 0) continue;
        HarqProcess p;
        p.ue = static_cast<std::uint32_t>(a.ue);
        p.direction = dir;
        p.tb_bits = a.tb_bits;
        p.n_prb = a.n_prb;
        p.payload = x.buf[d].pull(bytes);
        remaining -= a.n_prb;
        granted[a.ue] = 1;
        txs.push_back({c, std::move(p), 0.0});
      }
      cell_prbs[c] = n_prb - remaining;
    }

    for (std::size_t u = 0; u < n_ues; ++u) {
      if (!granted[u]) continue;
      if (!eligible[u]) {
        ++st.grants_to_sleeping;
        continue;
      }
      drx_on_grant(cfg.drx, ues[u].drx, t0);
    }

    // PHY: transmitted bytes, UL powers and CSI measurements.
    std::fill(served_bits.begin(), served_bits.end(), 0);
    for (auto& tx : txs) {
      std::int64_t bytes = 0;
      for (const auto& seg : tx.proc.payload) {
        bytes += seg.bytes;
        ++ues[tx.proc.ue].n_tx[seg.stream][seg.packet];
      }
      if (tx.proc.direction == Direction::DL) {
        st.dl_bytes_sent += bytes;
        if (kind == SlotKind::U) st.dl_bytes_in_u_slots += bytes;
      } else {
        st.ul_bytes_sent += bytes;
        if (kind != SlotKind::U) st.ul_bytes_in_d_slots += bytes;
        tx.ul_power_prb_mw = db_to_linear(ul_power_prb_dbm(tx.proc.ue, tx.proc.n_prb));
      }
      served_bits[tx.proc.ue] += tx.proc.tb_bits;
      (tx.proc.attempts == 0 ? st.first_transmissions : st.retransmissions) += 1;
    }

    if (dir == Direction::DL && dl_csi_due) {
      dl_csi_due = false;
      std::vector<double> weight(n_cells, 1.0);
      if (cfg.radio.dl_interference != DlInterference::full_buffer) {
        for (std::size_t c = 0; c < n_cells; ++c) {
          const double load = static_cast<double>(cell_prbs[c]) / n_prb;
          weight[c] = cfg.radio.dl_interference == DlInterference::active_prb_fraction ? load
                                                                                       : (load > 0.0 ? 1.0 : 0.0);
        }
      }
      for (std::size_t u = 0; u < n_ues; ++u) {
        UeCtx& x = ues[u];
        double interf = 0.0;
        for (std::size_t c = 0; c < n_cells; ++c)
          if (c != x.serving && weight[c] > 0.0) interf += dl_prb_mw * gain[u * n_cells + c] * ifactor * weight[c];
        x.dl_sinr_db = linear_to_db(dl_prb_mw * db_to_linear(x.serving_gain_db) / (interf + ue_noise_mw));
      }
    } else if (dir == Direction::UL && ul_csi_due) {
      ul_csi_due = false;
      std::fill(ul_interf_mw.begin(), ul_interf_mw.end(), 0.0);
      for (const auto& tx : txs) {
        const double occupancy = static_cast<double>(tx.proc.n_prb) / n_prb;
        for (std::size_t c = 0; c < n_cells; ++c)
          if (c != tx.cell)
            ul_interf_mw[c] += tx.ul_power_prb_mw * gain[tx.proc.ue * n_cells + c] * ifactor * occupancy;
      }
    }

    // HARQ outcomes and deliveries.
    for (auto& tx : txs) {
      UeCtx& x = ues[tx.proc.ue];
      switch (harq_step(tx.proc, s, x.harq_rng, harq, radio)) {
        case HarqResult::delivered:
          for (const auto& seg : tx.proc.payload) {
            auto& left = x.unacked[seg.stream][seg.packet];
            if (seg.bytes > left) throw InvariantViolation("delivered more bytes than a packet holds");
            left -= seg.bytes;
            x.delivered[seg.stream] += seg.bytes;
            if (left == 0) x.completion[seg.stream][seg.packet] = t1;
          }
          break;
        case HarqResult::retx_scheduled:
          retx[tx.cell].push_back(std::move(tx.proc));
          break;
        case HarqResult::exhausted:
          ++st.harq_exhausted;
          x.buf[dir_index(tx.proc.direction)].push_front(tx.proc.payload);
          break;
      }
    }

    // Power attribution and PF averages.
    for (std::size_t u = 0; u < n_ues; ++u) {
      if (eligible[u]) {
        SlotActivity a = SlotActivity::idle;
        if (served_bits[u] > 0) a = dir == Direction::DL ? SlotActivity::dl_data : SlotActivity::ul_data;
        ues[u].ledger.add_awake_slot(a);
      } else {
        ues[u].ledger.add_sleep_slot();
      }
      pf[d].update(u, served_bits[u], slot_ms);
      pf[1 - d].update(u, 0, slot_ms);
    }
  }

  // KPI extraction.
  std::vector<std::uint32_t> ids;
  for (std::size_t u = 0; u < n_ues; ++u) {
    UeCtx& x = ues[u];
    x.ledger.finish();
    ids.push_back(sc.ues[u].ue_id);
    for (std::size_t k = 0; k < tmpl.streams.size(); ++k) {
      const StreamConfig& scfg = tmpl.streams[k];
      for (std::size_t i = 0; i < x.packets[k].size(); ++i) {
        const Packet& p = x.packets[k][i];
        const double done = x.completion[k][i];
        const bool finished = !std::isnan(done);
        if (cfg.output.packet_trace) {
          PacketTrace tr{p.ue_id, p.stream_id, p.packet_id, p.size_bytes, p.arrival_ms,
                         finished ? std::optional<double>(done) : std::nullopt, false, x.n_tx[k][i]};
          tr.on_time = finished && done - p.arrival_ms <= scfg.pdb_ms + 1e-9;
          res.traces.push_back(tr);
        }
        if (p.arrival_ms < warmup_ms || p.deadline_ms > horizon_ms + 1e-9) continue;
        DelayRecord r;
        if (finished) {
          r = complete_packet(p, scfg, done);
        } else {
          r = complete_packet(p, scfg, std::numeric_limits<double>::infinity());
          r.on_time = false;
        }
        res.records.push_back(r);
      }
    }
  }

  const auto verdicts = evaluate_ues(res.records, ids, cfg.kpi);
  std::vector<std::size_t> evaluated(n_ues, 0), on_time(n_ues, 0);
  std::map<std::uint32_t, std::size_t> index_of;
  for (std::size_t u = 0; u < n_ues; ++u) index_of[ids[u]] = u;
  for (const auto& r : res.records) {
    const std::size_t u = index_of.at(r.ue);
    ++evaluated[u];
    if (r.on_time) ++on_time[u];
  }

  res.ues.resize(n_ues);
  for (std::size_t u = 0; u < n_ues; ++u) {
    UeResult& out = res.ues[u];
    out.ue_id = ids[u];
    out.serving_cell = sc.ues[u].serving_cell;
    out.indoor = sc.ues[u].indoor;
    out.dl_csi_sinr_db = ues[u].dl_sinr_db;
    out.verdict = verdicts[u];
    out.packets_evaluated = evaluated[u];
    out.packets_on_time = on_time[u];
    out.power = ues[u].ledger;
    out.avg_power = ues[u].ledger.average_power(cfg.power);
  }

  // Byte accounting per stream.
  for (std::size_t u = 0; u < n_ues; ++u) {
    const UeCtx& x = ues[u];
    for (std::size_t k = 0; k < tmpl.streams.size(); ++k) {
      StreamBytes b;
      b.ue = ids[u];
      b.stream = static_cast<std::uint32_t>(k);
      b.generated = x.generated[k];
      b.delivered = x.delivered[k];
      b.discarded = x.discarded[k];
      b.queued = x.buf[dir_index(tmpl.streams[k].direction)].stream_bytes(static_cast<std::uint32_t>(k));
      st.stream_bytes.push_back(b);
    }
  }
  for (const auto& pend : retx)
    for (const auto& p : pend)
      for (const auto& seg : p.payload)
        st.stream_bytes[p.ue * tmpl.streams.size() + seg.stream].in_flight += seg.bytes;

  res.wall_clock_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return res;
}

RunSummary summarize(const RunResult& r) {
  RunSummary s;
  s.n_per_cell = r.config.scenario.n_ue_per_cell;
  s.seed = r.seed;
  const auto v = r.verdicts();
  s.all = count_scope(v, Scope::all);
  s.dl = count_scope(v, Scope::DL);
  s.ul = count_scope(v, Scope::UL);
  s.on_time_packets = r.on_time_packets();
  s.evaluated_packets = r.records.size();
  double p = 0.0;
  for (const auto& u : r.ues) p += u.avg_power;
  s.avg_power = r.ues.empty() ? 0.0 : p / static_cast<double>(r.ues.size());
  return s;
}

SweepResult run_sweep(const SimConfig& cfg, const std::vector<int>& n_list,
                      const std::vector<std::uint64_t>& seeds, int threads) {
  cfg.validate();
  if (n_list.empty() || !std::is_sorted(n_list.begin(), n_list.end()))
    throw ConfigError("sweep n list must be non-empty and ascending", {"sim.n_list"});
  if (seeds.empty()) throw ConfigError("sweep needs at least one seed", {"sim.seeds"});

  std::vector<std::pair<int, std::uint64_t>> jobs;
  for (int n : n_list)
    for (auto seed : seeds) jobs.emplace_back(n, seed);

  std::vector<RunSummary> summaries(jobs.size());
  std::vector<std::vector<UeVerdict>> verdicts(jobs.size());
  const auto failures = parallel_for(jobs.size(), threads, [&](std::size_t i) {
    SimConfig c = cfg;
    c.scenario.n_ue_per_cell = jobs[i].first;
    c.output.packet_trace = false;
    const RunResult r = run_simulation(c, jobs[i].second);
    summaries[i] = summarize(r);
    verdicts[i] = r.verdicts();
  });
  if (!failures.empty()) {
    std::vector<std::pair<int, std::uint64_t>> failed;
    std::string msg = "sweep runs failed:";
    for (const auto& [i, what] : failures) {
      failed.push_back(jobs[i]);
      msg += " (n=" + std::to_string(jobs[i].first) + ", seed=" + std::to_string(jobs[i].second) + ": " + what + ")";
    }
    throw SweepError(msg, failed);
  }

  SweepResult out;
  out.runs = summaries;
  const SimFactory factory = [&](int n) {
    std::vector<UeVerdict> pooled;
    for (std::size_t i = 0; i < jobs.size(); ++i)
      if (jobs[i].first == n) pooled.insert(pooled.end(), verdicts[i].begin(), verdicts[i].end());
    return pooled;
  };
  out.capacity = capacity_search(factory, n_list, cfg.kpi);
  return out;
}

std::vector<std::pair<std::string, DrxConfig>> named_drx_schemes() {
  return {{"CDRX1", DrxConfig::make(4, 2, 2)},
          {"CDRX2", DrxConfig::make(10, 5, 2)},
          {"CDRX3", DrxConfig::make(10, 5, 5)},
          {"CDRX4", DrxConfig::make(10, 8, 2)}};
}

std::vector<PowerStudyRow> run_power_study(const SimConfig& cfg, const std::vector<DrxConfig>& drx_configs,
                                           const std::vector<std::uint64_t>& seeds, int n_per_cell,
                                           const std::optional<std::vector<int>>& n_list, int threads) {
  cfg.validate();
  if (seeds.empty()) throw ConfigError("power study needs at least one seed", {"sim.seeds"});
  std::vector<DrxConfig> schemes{DrxConfig::always_on()};
  for (const auto& d : drx_configs) {
    d.validate();
    if (d.enabled) schemes.push_back(d);
  }

  const std::size_t n_jobs = schemes.size() * seeds.size();
  std::vector<RunSummary> summaries(n_jobs);
  const auto failures = parallel_for(n_jobs, threads, [&](std::size_t i) {
    SimConfig c = cfg;
    c.drx = schemes[i / seeds.size()];
    c.scenario.n_ue_per_cell = n_per_cell;
    c.output.packet_trace = false;
    summaries[i] = summarize(run_simulation(c, seeds[i % seeds.size()]));
  });
  if (!failures.empty()) {
    std::vector<std::pair<int, std::uint64_t>> failed;
    for (const auto& f : failures) failed.emplace_back(n_per_cell, seeds[f.first % seeds.size()]);
    throw SweepError("power study runs failed: " + failures.front().second, failed);
  }

  std::vector<PowerStudyRow> rows;
  for (std::size_t k = 0; k < schemes.size(); ++k) {
    PowerStudyRow row;
    row.drx = schemes[k];
    row.label = schemes[k].label();
    double p = 0.0;
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      const RunSummary& s = summaries[k * seeds.size() + j];
      p += s.avg_power;
      row.all.satisfied += s.all.satisfied;
      row.all.total += s.all.total;
      row.dl.satisfied += s.dl.satisfied;
      row.dl.total += s.dl.total;
      row.on_time_packets += s.on_time_packets;
    }
    row.avg_power = p / static_cast<double>(seeds.size());
    rows.push_back(row);
  }
  for (auto& row : rows) {
    row.gain = power_saving_gain(row.avg_power, rows.front().avg_power);
    row.satisfaction_delta = row.all.fraction() - rows.front().all.fraction();
    row.dl_satisfaction_delta = row.dl.fraction() - rows.front().dl.fraction();
  }
  if (n_list) {
    for (auto& row : rows) {
      SimConfig c = cfg;
      c.drx = row.drx;
      row.capacity = run_sweep(c, *n_list, seeds, threads).capacity;
    }
  }
  return rows;
}

}  // namespace xrsim
