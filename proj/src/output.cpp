#include "xrsim/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "xrsim/errors.hpp"

namespace xrsim {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string num(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string opt_bool(const std::optional<bool>& v) { return v ? (*v ? "1" : "0") : ""; }

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + path + "'");
  return os;
}

ordered_json config_json(const SimConfig& cfg) {
  ordered_json j = ordered_json::object();
  for (const auto& k : config_keys()) j[k] = config_get(cfg, k);
  return j;
}

ordered_json count_json(const SatisfactionCount& c) {
  return {{"satisfied", c.satisfied}, {"total", c.total}, {"fraction", c.fraction()}};
}

std::string header(const SimConfig& cfg, std::int64_t seed) {
  std::string h = seed >= 0 ? "# seed=" + std::to_string(seed) + "\n" : "";
  return h + config_header_lines(cfg);
}

std::string seeds_text(const std::vector<std::uint64_t>& seeds) {
  std::string s;
  for (std::size_t i = 0; i < seeds.size(); ++i) s += (i ? "," : "") + std::to_string(seeds[i]);
  return s;
}

}  // namespace

std::string result_stem(const SimConfig& cfg, int n_per_cell, long long seed) {
  std::string s = to_string(cfg.scenario.deployment) + "_" + to_string(cfg.scenario.fr) + "_" +
                  to_string(cfg.scenario.service) + "_" +
                  num(cfg.traffic.session.dl_video_rate_bps / 1e6, "%g") + "M_n" + std::to_string(n_per_cell);
  if (seed >= 0) s += "_s" + std::to_string(seed);
  return s;
}

std::vector<std::string> write_run_outputs(const RunResult& r, const std::string& dir) {
  fs::create_directories(dir);
  const SimConfig& cfg = r.config;
  const std::string stem = (fs::path(dir) / result_stem(cfg, cfg.scenario.n_ue_per_cell,
                                                        static_cast<long long>(r.seed)))
                               .string();
  const std::string hdr = header(cfg, static_cast<std::int64_t>(r.seed));
  std::vector<std::string> paths;

  {
    auto os = open_out(paths.emplace_back(stem + "_ues.csv"));
    os << hdr << "ue,serving_cell,indoor,dl_csi_sinr_db,packets,on_time,satisfied_all,satisfied_dl,satisfied_ul\n";
    for (const auto& u : r.ues)
      os << u.ue_id << "," << u.serving_cell << "," << (u.indoor ? 1 : 0) << "," << num(u.dl_csi_sinr_db, "%.3f")
         << "," << u.packets_evaluated << "," << u.packets_on_time << "," << opt_bool(u.verdict.all) << ","
         << opt_bool(u.verdict.dl) << "," << opt_bool(u.verdict.ul) << "\n";
  }
  {
    auto os = open_out(paths.emplace_back(stem + "_power.csv"));
    os << hdr << "ue,scheme,avg_power_units,slots_active,slots_sleep,slots_deep_sleep\n";
    for (const auto& u : r.ues)
      os << u.ue_id << "," << cfg.drx.label() << "," << num(u.avg_power) << "," << u.power.awake_slots() << ","
         << u.power.sleep_slots() << "," << u.power.slots(PowerState::deep_sleep) << "\n";
  }
  if (cfg.output.packet_trace) {
    auto os = open_out(paths.emplace_back(stem + "_packets.csv"));
    os << hdr << "ue,stream,packet_id,size_B,arrival_ms,completion_ms,delay_ms,on_time,n_tx\n";
    for (const auto& t : r.traces) {
      os << t.ue << "," << t.stream << "," << t.packet_id << "," << t.size_bytes << ","
         << num(t.arrival_ms, "%.4f") << ",";
      if (t.completion_ms)
        os << num(*t.completion_ms, "%.4f") << "," << num(*t.completion_ms - t.arrival_ms, "%.4f");
      else
        os << ",";
      os << "," << (t.on_time ? 1 : 0) << "," << t.n_tx << "\n";
    }
  }
  {
    const auto v = r.verdicts();
    ordered_json j;
    j["seed"] = r.seed;
    j["n_ue_per_cell"] = cfg.scenario.n_ue_per_cell;
    j["n_ues"] = r.ues.size();
    j["satisfied"] = {{"all", count_json(count_scope(v, Scope::all))},
                      {"dl", count_json(count_scope(v, Scope::DL))},
                      {"ul", count_json(count_scope(v, Scope::UL))}};
    j["packets"] = {{"evaluated", r.records.size()}, {"on_time", r.on_time_packets()}};
    const auto& st = r.stats;
    j["mac"] = {{"slots", st.n_slots},
                {"dl_bytes_sent", st.dl_bytes_sent},
                {"ul_bytes_sent", st.ul_bytes_sent},
                {"dl_bytes_in_u_slots", st.dl_bytes_in_u_slots},
                {"ul_bytes_in_d_slots", st.ul_bytes_in_d_slots},
                {"grants_to_sleeping", st.grants_to_sleeping},
                {"first_transmissions", st.first_transmissions},
                {"retransmissions", st.retransmissions},
                {"harq_exhausted", st.harq_exhausted},
                {"bytes_conserved", st.bytes_conserved()}};
    j["config"] = config_json(cfg);
    auto os = open_out(paths.emplace_back(stem + "_summary.json"));
    os << j.dump(2) << "\n";
  }
  {
    auto os = open_out(paths.emplace_back(stem + "_config.ini"));
    os << "# seed=" << r.seed << "\n" << config_to_ini(cfg);
  }
  return paths;
}

std::vector<std::string> write_capacity_outputs(const SimConfig& cfg, const SweepResult& sweep,
                                                const std::vector<std::uint64_t>& seeds,
                                                const std::string& dir) {
  fs::create_directories(dir);
  const std::string stem =
      (fs::path(dir) / ("capacity_" + result_stem(cfg, cfg.sim.n_list.empty() ? 0 : cfg.sim.n_list.back(), -1)))
          .string();
  std::vector<std::string> paths;
  {
    auto os = open_out(paths.emplace_back(stem + "_curve.csv"));
    os << "# seeds=" << seeds_text(seeds) << "\n" << header(cfg, -1);
    os << "n,direction,fraction,satisfied,total,seeds\n";
    for (const auto& p : sweep.capacity.curve)
      os << p.n_per_cell << "," << to_string(p.scope) << "," << num(p.count.fraction()) << ","
         << p.count.satisfied << "," << p.count.total << "," << seeds.size() << "\n";
  }
  {
    const auto& c = sweep.capacity;
    ordered_json j;
    j["capacity_dl"] = c.capacity_dl;
    j["capacity_ul"] = c.capacity_ul;
    j["capacity_combined"] = c.combined;
    j["capacity_all_streams"] = c.capacity_all;
    j["interpolated_dl"] = c.interpolated_dl ? ordered_json(*c.interpolated_dl) : ordered_json(nullptr);
    j["interpolated_ul"] = c.interpolated_ul ? ordered_json(*c.interpolated_ul) : ordered_json(nullptr);
    j["seeds"] = seeds;
    ordered_json runs = ordered_json::array();
    for (const auto& r : sweep.runs)
      runs.push_back({{"n", r.n_per_cell},
                      {"seed", r.seed},
                      {"all", count_json(r.all)},
                      {"dl", count_json(r.dl)},
                      {"ul", count_json(r.ul)},
                      {"on_time_packets", r.on_time_packets},
                      {"evaluated_packets", r.evaluated_packets}});
    j["runs"] = runs;
    j["config"] = config_json(cfg);
    auto os = open_out(paths.emplace_back(stem + "_summary.json"));
    os << j.dump(2) << "\n";
  }
  return paths;
}

std::vector<std::string> write_power_outputs(const SimConfig& cfg, const std::vector<PowerStudyRow>& rows,
                                             const std::vector<std::uint64_t>& seeds, int n_per_cell,
                                             const std::string& dir) {
  fs::create_directories(dir);
  const std::string stem = (fs::path(dir) / ("power_" + result_stem(cfg, n_per_cell, -1))).string();
  std::vector<std::string> paths;
  {
    auto os = open_out(paths.emplace_back(stem + ".csv"));
    os << "# seeds=" << seeds_text(seeds) << "\n" << header(cfg, -1);
    os << "scheme,avg_power_units,gain_pct,ratio,satisfied_fraction,satisfied_fraction_dl,satisfaction_delta,"
          "satisfaction_delta_dl,on_time_packets,capacity_dl,capacity_combined\n";
    for (const auto& r : rows) {
      os << r.label << "," << num(r.avg_power) << "," << num(r.gain.gain_pct) << "," << num(r.gain.ratio) << ","
         << num(r.all.fraction()) << "," << num(r.dl.fraction()) << "," << num(r.satisfaction_delta) << ","
         << num(r.dl_satisfaction_delta) << "," << r.on_time_packets << ",";
      if (r.capacity) os << r.capacity->capacity_dl;
      os << ",";
      if (r.capacity) os << r.capacity->combined;
      os << "\n";
    }
  }
  {
    ordered_json j;
    j["n_ue_per_cell"] = n_per_cell;
    j["seeds"] = seeds;
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      ordered_json e = {{"scheme", r.label},
                        {"avg_power_units", r.avg_power},
                        {"gain_pct", r.gain.gain_pct},
                        {"ratio", r.gain.ratio},
                        {"satisfied", count_json(r.all)},
                        {"satisfied_dl", count_json(r.dl)},
                        {"satisfaction_delta", r.satisfaction_delta},
                        {"satisfaction_delta_dl", r.dl_satisfaction_delta},
                        {"on_time_packets", r.on_time_packets}};
      if (r.capacity) {
        e["capacity_dl"] = r.capacity->capacity_dl;
        e["capacity_combined"] = r.capacity->combined;
      }
      arr.push_back(e);
    }
    j["schemes"] = arr;
    j["config"] = config_json(cfg);
    auto os = open_out(paths.emplace_back(stem + "_summary.json"));
    os << j.dump(2) << "\n";
  }
  return paths;
}

void write_layout_csv(const Scenario& sc, std::ostream& os) {
  os << "type,id,x_m,y_m,z_m,azimuth_deg,site_or_serving,indoor\n";
  for (const auto& c : sc.layout.cells)
    os << "cell," << c.cell_id << "," << num(c.site.x, "%.3f") << "," << num(c.site.y, "%.3f") << ","
       << num(c.height_m, "%.1f") << "," << num(c.azimuth_deg, "%.1f") << "," << c.site_id << ",\n";
  for (const auto& u : sc.ues)
    os << "ue," << u.ue_id << "," << num(u.position.x, "%.3f") << "," << num(u.position.y, "%.3f") << ","
       << num(u.position.z, "%.1f") << ",," << u.serving_cell << "," << (u.indoor ? 1 : 0) << "\n";
}

void write_links_csv(const Scenario& sc, std::ostream& os) {
  os << "cell,ue,pathloss_db,shadowing_db,los,coupling_db,rsrp_dbm\n";
  for (std::size_t u = 0; u < sc.ues.size(); ++u)
    for (std::size_t c = 0; c < sc.channel.n_cells(); ++c) {
      const LinkState& l = sc.channel.link(c, u);
      os << c << "," << sc.ues[u].ue_id << "," << num(l.pathloss_db, "%.3f") << "," << num(l.shadowing_db, "%.3f")
         << "," << (l.los ? 1 : 0) << "," << num(l.coupling_gain_db, "%.3f") << ","
         << num(rsrp_dbm(sc.profile.bs_tx_power_dbm, sc.profile.n_prb, l.coupling_gain_db), "%.3f") << "\n";
    }
}

double truncated_gaussian_std(const TruncGaussSpec& spec) {
  if (spec.std <= 0.0) return 0.0;
  const auto phi = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
  const auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); };
  const double a = (spec.min - spec.mean) / spec.std;
  const double b = (spec.max - spec.mean) / spec.std;
  const double z = cdf(b) - cdf(a);
  const double m = (phi(a) - phi(b)) / z;
  const double var = 1.0 + (a * phi(a) - b * phi(b)) / z - m * m;
  return spec.std * std::sqrt(var);
}

std::vector<TrafficCheck> validate_traffic(std::size_t n_packets, std::uint64_t seed) {
  std::vector<StreamConfig> streams = {
      build_video_stream(Service::VR, Direction::DL, 60, 30e6),
      build_video_stream(Service::VR, Direction::DL, 60, 45e6),
      build_video_stream(Service::CG, Direction::DL, 60, 8e6),
      build_video_stream(Service::CG, Direction::DL, 60, 30e6),
      build_video_stream(Service::AR, Direction::UL, 60, 10e6, std::nullopt),
      build_motion_stream(),
      build_audio_stream(Service::AR, Direction::DL, 0.756e6),
      build_audio_stream(Service::AR, Direction::UL, 1.12e6),
  };
  std::vector<TrafficCheck> out;
  for (std::size_t i = 0; i < streams.size(); ++i) {
    const StreamConfig& s = streams[i];
    RngStream rng(seed, make_stream_id({static_cast<std::uint64_t>(RngPurpose::traffic), i}));
    const double horizon = static_cast<double>(n_packets) * 1000.0 / s.packet_rate();
    const auto pkts = generate_arrivals(s, rng, horizon);
    TrafficCheck c;
    c.stream = s.label();
    c.n = pkts.size();
    double sum = 0.0, sum2 = 0.0;
    c.min_bytes = std::numeric_limits<double>::infinity();
    c.max_bytes = 0.0;
    for (const auto& p : pkts) {
      const double b = p.size_bytes;
      sum += b;
      sum2 += b * b;
      c.min_bytes = std::min(c.min_bytes, b);
      c.max_bytes = std::max(c.max_bytes, b);
    }
    const double n = static_cast<double>(std::max<std::size_t>(c.n, 1));
    c.mean_bytes = sum / n;
    c.std_bytes = std::sqrt(std::max(0.0, sum2 / n - c.mean_bytes * c.mean_bytes));
    c.rate_bps = sum * 8.0 / (horizon / 1000.0);
    c.expected_mean = s.size_bytes.mean;
    c.expected_std = truncated_gaussian_std(s.size_bytes);
    c.expected_rate = s.avg_rate_bps;
    const bool mean_ok = std::abs(c.mean_bytes - c.expected_mean) <= 0.01 * c.expected_mean;
    // Integer rounding adds up to 1/sqrt(12) B of spread on constant sizes.
    const bool std_ok = c.expected_std > 0.0 ? std::abs(c.std_bytes - c.expected_std) <= 0.05 * c.expected_std
                                             : c.std_bytes < 0.5;
    const bool bounds_ok = c.min_bytes >= std::floor(s.size_bytes.min) && c.max_bytes <= std::ceil(s.size_bytes.max);
    c.pass = c.n > 0 && mean_ok && std_ok && bounds_ok;
    out.push_back(c);
  }
  return out;
}

void write_traffic_csv(const std::vector<TrafficCheck>& rows, std::ostream& os) {
  os << "stream,n,empirical_mean_B,empirical_std_B,empirical_rate_bps,min_B,max_B,expected_mean_B,expected_std_B,"
        "expected_rate_bps,pass\n";
  for (const auto& r : rows)
    os << r.stream << "," << r.n << "," << num(r.mean_bytes, "%.3f") << "," << num(r.std_bytes, "%.3f") << ","
       << num(r.rate_bps, "%.1f") << "," << num(r.min_bytes, "%.0f") << "," << num(r.max_bytes, "%.0f") << ","
       << num(r.expected_mean, "%.3f") << "," << num(r.expected_std, "%.3f") << "," << num(r.expected_rate, "%.1f")
       << "," << (r.pass ? "PASS" : "FAIL") << "\n";
}

}  // namespace xrsim
