#include "xrsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "xrsim/errors.hpp"

namespace xrsim {

std::string to_string(DlInterference m) {
  switch (m) {
    case DlInterference::active_prb_fraction: return "active_prb_fraction";
    case DlInterference::active_full_band: return "active_full_band";
    case DlInterference::full_buffer: return "full_buffer";
  }
  return "?";
}

DlInterference parse_dl_interference(const std::string& text) {
  if (text == "active_prb_fraction") return DlInterference::active_prb_fraction;
  if (text == "active_full_band") return DlInterference::active_full_band;
  if (text == "full_buffer") return DlInterference::full_buffer;
  throw ConfigError("unknown DL interference model '" + text + "'", {"radio.dl_interference"});
}

HarqConfig SimConfig::harq() const {
  HarqConfig h;
  h.rtt_slots = mac.harq_rtt_slots > 0 ? mac.harq_rtt_slots : default_harq_rtt_slots(scenario.fr);
  h.max_retx = mac.max_retx;
  return h;
}

void SimConfig::validate() const {
  std::vector<std::string> bad;
  auto check = [&](bool ok, const char* key) {
    if (!ok) bad.emplace_back(key);
  };
  check(scenario.n_ue_per_cell >= 0, "scenario.n_ue_per_cell");
  check(scenario.drop.outdoor_probability >= 0.0 && scenario.drop.outdoor_probability <= 1.0,
        "scenario.outdoor_probability");
  check(scenario.drop.n_floors >= 1, "scenario.n_floors");
  check(scenario.drop.floor_height_m > 0.0, "scenario.floor_height_m");

  const auto& s = traffic.session;
  check(s.fps == 30.0 || s.fps == 60.0 || s.fps == 90.0 || s.fps == 120.0, "traffic.fps");
  check(s.dl_video_rate_bps > 0.0, "traffic.dl_video_rate_mbps");
  check(s.ul_video_rate_bps > 0.0, "traffic.ul_video_rate_mbps");
  check(s.dl_audio_rate_bps > 0.0, "traffic.dl_audio_rate_mbps");
  check(s.ul_audio_rate_bps > 0.0, "traffic.ul_audio_rate_mbps");
  check(s.jitter.std >= 0.0 && s.jitter.min <= 0.0 && s.jitter.max >= 0.0 &&
            s.jitter.min < s.jitter.max,
        "traffic.jitter_std_ms");
  check(s.jitter.max - s.jitter.min < 1000.0 / 120.0 * 2.0, "traffic.jitter_max_ms");

  const auto& r = radio.params;
  check(r.eta > 0.0 && r.eta <= 1.0, "radio.eta");
  check(r.se_max > 0.0, "radio.se_max");
  check(r.bler_first >= 0.0 && r.bler_first < 1.0, "radio.bler_first");
  check(r.bler_retx >= 0.0 && r.bler_retx < 1.0, "radio.bler_retx");
  check(r.csi_period_ms > 0.0, "radio.csi_period_ms");
  check(r.s_slot_dl_fraction >= 0.0 && r.s_slot_dl_fraction <= 1.0, "radio.s_slot_dl_fraction");
  check(r.data_symbols >= 1 && r.data_symbols <= 14, "radio.data_symbols");
  check(r.control_symbols >= 0 && r.control_symbols <= 14, "radio.control_symbols");
  check(r.shadowing_site_correlation >= 0.0 && r.shadowing_site_correlation <= 1.0,
        "radio.shadowing_site_correlation");
  check(r.fr1_interference_factor >= 0.0, "radio.fr1_interference_factor");
  check(r.fr2_interference_factor >= 0.0, "radio.fr2_interference_factor");
  check(r.ul_alpha >= 0.0 && r.ul_alpha <= 1.0, "radio.ul_alpha");

  check(mac.harq_rtt_slots >= 0, "mac.harq_rtt_slots");
  check(mac.max_retx >= 0, "mac.max_retx");
  check(mac.pf_time_constant_ms > 0.0, "mac.pf_time_constant_ms");
  check(mac.ul_bsr_delay_slots >= 0, "mac.ul_bsr_delay_slots");

  check(power.deep_sleep >= 0.0, "power.deep_sleep");
  check(power.light_sleep >= 0.0, "power.light_sleep");
  check(power.pdcch_only > 0.0, "power.pdcch_only");
  check(power.pdsch_rx >= 0.0, "power.pdsch_rx");
  check(power.pusch_tx >= 0.0, "power.pusch_tx");
  check(power.deep_sleep_threshold_ms >= 0.0, "power.deep_sleep_threshold_ms");

  check(kpi.x_percent > 0.0 && kpi.x_percent <= 100.0, "kpi.x_percent");
  check(kpi.y_percent > 0.0 && kpi.y_percent <= 100.0, "kpi.y_percent");

  check(sim.horizon_s > 0.0, "sim.horizon_s");
  check(sim.warmup_s >= 0.0 && sim.warmup_s < sim.horizon_s, "sim.warmup_s");
  check(!sim.seeds.empty(), "sim.seeds");
  check(!sim.n_list.empty() && std::is_sorted(sim.n_list.begin(), sim.n_list.end()) &&
            sim.n_list.front() >= 0,
        "sim.n_list");
  check(sim.threads >= 0, "sim.threads");

  if (drx.enabled) {
    check(drx.long_cycle_ms > 0.0, "drx.long_cycle_ms");
    check(drx.on_duration_ms > 0.0 && drx.on_duration_ms <= drx.long_cycle_ms, "drx.on_duration_ms");
    check(drx.inactivity_timer_ms > 0.0, "drx.inactivity_timer_ms");
  }

  if (!bad.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& k : bad) msg += " " + k;
    throw ConfigError(msg, bad);
  }
}

// --- key registry ------------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw ConfigError("'" + key + "': not a number: '" + text + "'", {key});
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  long long v = 0;
  const char* last = text.data() + text.size();
  auto res = std::from_chars(text.data(), last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw ConfigError("'" + key + "': not an integer: '" + text + "'", {key});
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("'" + key + "': not a boolean: '" + text + "'", {key});
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
std::string join_list(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

struct Entry {
  std::string key;
  std::function<std::string(const SimConfig&)> get;
  std::function<void(SimConfig&, const std::string&)> set;
};

// Accessors return a reference into the config so one lambda serves get and set.
template <typename F>
Entry real_entry(std::string key, F ref, double scale = 1.0) {
  return {key,
          [ref, scale](const SimConfig& c) { return fmt_double(ref(const_cast<SimConfig&>(c)) / scale); },
          [ref, scale, key](SimConfig& c, const std::string& v) { ref(c) = parse_double(key, v) * scale; }};
}

template <typename F>
Entry int_entry(std::string key, F ref) {
  return {key, [ref](const SimConfig& c) { return std::to_string(ref(const_cast<SimConfig&>(c))); },
          [ref, key](SimConfig& c, const std::string& v) {
            ref(c) = static_cast<std::remove_reference_t<decltype(ref(c))>>(parse_int(key, v));
          }};
}

template <typename F>
Entry bool_entry(std::string key, F ref) {
  return {key, [ref](const SimConfig& c) { return ref(const_cast<SimConfig&>(c)) ? "true" : "false"; },
          [ref, key](SimConfig& c, const std::string& v) { ref(c) = parse_bool(key, v); }};
}

#define XR_REF(expr) [](SimConfig& c) -> auto& { return c.expr; }

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> e;
    // scenario
    e.push_back({"scenario.deployment", [](const SimConfig& c) { return to_string(c.scenario.deployment); },
                 [](SimConfig& c, const std::string& v) { c.scenario.deployment = parse_deployment(v); }});
    e.push_back({"scenario.fr", [](const SimConfig& c) { return to_string(c.scenario.fr); },
                 [](SimConfig& c, const std::string& v) { c.scenario.fr = parse_fr(v); }});
    e.push_back({"scenario.service", [](const SimConfig& c) { return to_string(c.scenario.service); },
                 [](SimConfig& c, const std::string& v) { c.scenario.service = parse_service(v); }});
    e.push_back(int_entry("scenario.n_ue_per_cell", XR_REF(scenario.n_ue_per_cell)));
    e.push_back(bool_entry("scenario.wraparound", XR_REF(scenario.wraparound)));
    e.push_back(real_entry("scenario.outdoor_probability", XR_REF(scenario.drop.outdoor_probability)));
    e.push_back(int_entry("scenario.n_floors", XR_REF(scenario.drop.n_floors)));
    e.push_back(real_entry("scenario.floor_height_m", XR_REF(scenario.drop.floor_height_m)));
    e.push_back(real_entry("scenario.ue_height_m", XR_REF(scenario.drop.ue_height_m)));
    e.push_back(real_entry("scenario.min_distance_du_m", XR_REF(scenario.drop.min_distance_du_m)));
    e.push_back(real_entry("scenario.min_distance_inh_m", XR_REF(scenario.drop.min_distance_inh_m)));
    // traffic
    e.push_back(real_entry("traffic.fps", XR_REF(traffic.session.fps)));
    e.push_back(real_entry("traffic.dl_video_rate_mbps", XR_REF(traffic.session.dl_video_rate_bps), 1e6));
    e.push_back(real_entry("traffic.ul_video_rate_mbps", XR_REF(traffic.session.ul_video_rate_bps), 1e6));
    e.push_back(bool_entry("traffic.multi_stream_video", XR_REF(traffic.session.multi_stream_video)));
    e.push_back(bool_entry("traffic.include_audio", XR_REF(traffic.session.include_audio)));
    e.push_back(bool_entry("traffic.include_ul_audio", XR_REF(traffic.session.include_ul_audio)));
    e.push_back(real_entry("traffic.dl_audio_rate_mbps", XR_REF(traffic.session.dl_audio_rate_bps), 1e6));
    e.push_back(real_entry("traffic.ul_audio_rate_mbps", XR_REF(traffic.session.ul_audio_rate_bps), 1e6));
    e.push_back(real_entry("traffic.jitter_std_ms", XR_REF(traffic.session.jitter.std)));
    e.push_back(real_entry("traffic.jitter_min_ms", XR_REF(traffic.session.jitter.min)));
    e.push_back(real_entry("traffic.jitter_max_ms", XR_REF(traffic.session.jitter.max)));
    e.push_back(bool_entry("traffic.dl_video_jitter", XR_REF(traffic.session.dl_video_jitter)));
    e.push_back(bool_entry("traffic.ul_video_jitter", XR_REF(traffic.session.ul_video_jitter)));
    e.push_back({"traffic.truncation",
                 [](const SimConfig& c) {
                   return c.traffic.session.truncation == Truncation::rejection ? "rejection" : "clamp";
                 },
                 [](SimConfig& c, const std::string& v) {
                   if (v == "rejection")
                     c.traffic.session.truncation = Truncation::rejection;
                   else if (v == "clamp")
                     c.traffic.session.truncation = Truncation::clamp;
                   else
                     throw ConfigError("traffic.truncation must be rejection or clamp", {"traffic.truncation"});
                 }});
    // radio
    e.push_back(real_entry("radio.eta", XR_REF(radio.params.eta)));
    e.push_back(real_entry("radio.se_max", XR_REF(radio.params.se_max)));
    e.push_back(real_entry("radio.bler_first", XR_REF(radio.params.bler_first)));
    e.push_back(real_entry("radio.bler_retx", XR_REF(radio.params.bler_retx)));
    e.push_back(real_entry("radio.csi_period_ms", XR_REF(radio.params.csi_period_ms)));
    e.push_back(real_entry("radio.s_slot_dl_fraction", XR_REF(radio.params.s_slot_dl_fraction)));
    e.push_back(int_entry("radio.data_symbols", XR_REF(radio.params.data_symbols)));
    e.push_back(int_entry("radio.control_symbols", XR_REF(radio.params.control_symbols)));
    e.push_back(real_entry("radio.shadowing_site_correlation", XR_REF(radio.params.shadowing_site_correlation)));
    e.push_back(bool_entry("radio.o2i_penetration", XR_REF(radio.params.o2i_penetration)));
    e.push_back(real_entry("radio.fr1_beam_gain_db", XR_REF(radio.params.fr1_beam_gain_db)));
    e.push_back(real_entry("radio.fr1_interference_factor", XR_REF(radio.params.fr1_interference_factor)));
    e.push_back(real_entry("radio.fr2_beam_gain_db", XR_REF(radio.params.fr2_beam_gain_db)));
    e.push_back(real_entry("radio.fr2_interference_factor", XR_REF(radio.params.fr2_interference_factor)));
    e.push_back(real_entry("radio.ul_p0_dbm_per_prb", XR_REF(radio.params.ul_p0_dbm_per_prb)));
    e.push_back(real_entry("radio.ul_alpha", XR_REF(radio.params.ul_alpha)));
    e.push_back({"radio.dl_interference", [](const SimConfig& c) { return to_string(c.radio.dl_interference); },
                 [](SimConfig& c, const std::string& v) { c.radio.dl_interference = parse_dl_interference(v); }});
    // mac
    e.push_back(int_entry("mac.harq_rtt_slots", XR_REF(mac.harq_rtt_slots)));
    e.push_back(int_entry("mac.max_retx", XR_REF(mac.max_retx)));
    e.push_back(real_entry("mac.pf_time_constant_ms", XR_REF(mac.pf_time_constant_ms)));
    e.push_back(bool_entry("mac.discard_late", XR_REF(mac.discard_late)));
    e.push_back(int_entry("mac.ul_bsr_delay_slots", XR_REF(mac.ul_bsr_delay_slots)));
    // drx
    e.push_back(bool_entry("drx.enabled", XR_REF(drx.enabled)));
    e.push_back(real_entry("drx.long_cycle_ms", XR_REF(drx.long_cycle_ms)));
    e.push_back(real_entry("drx.on_duration_ms", XR_REF(drx.on_duration_ms)));
    e.push_back(real_entry("drx.inactivity_timer_ms", XR_REF(drx.inactivity_timer_ms)));
    // power
    e.push_back(real_entry("power.deep_sleep", XR_REF(power.deep_sleep)));
    e.push_back(real_entry("power.light_sleep", XR_REF(power.light_sleep)));
    e.push_back(real_entry("power.pdcch_only", XR_REF(power.pdcch_only)));
    e.push_back(real_entry("power.pdsch_rx", XR_REF(power.pdsch_rx)));
    e.push_back(real_entry("power.pusch_tx", XR_REF(power.pusch_tx)));
    e.push_back(real_entry("power.deep_sleep_threshold_ms", XR_REF(power.deep_sleep_threshold_ms)));
    // kpi
    e.push_back(real_entry("kpi.x_percent", XR_REF(kpi.x_percent)));
    e.push_back(real_entry("kpi.y_percent", XR_REF(kpi.y_percent)));
    e.push_back({"kpi.per_stream_rule", [](const SimConfig& c) { return to_string(c.kpi.per_stream_rule); },
                 [](SimConfig& c, const std::string& v) { c.kpi.per_stream_rule = parse_stream_rule(v); }});
    // sim
    e.push_back(real_entry("sim.horizon_s", XR_REF(sim.horizon_s)));
    e.push_back(real_entry("sim.warmup_s", XR_REF(sim.warmup_s)));
    e.push_back({"sim.seeds", [](const SimConfig& c) { return join_list(c.sim.seeds); },
                 [](SimConfig& c, const std::string& v) {
                   c.sim.seeds.clear();
                   for (const auto& s : split_list(v)) {
                     const auto n = parse_int("sim.seeds", s);
                     if (n < 0) throw ConfigError("sim.seeds must be non-negative", {"sim.seeds"});
                     c.sim.seeds.push_back(static_cast<std::uint64_t>(n));
                   }
                 }});
    e.push_back({"sim.n_list", [](const SimConfig& c) { return join_list(c.sim.n_list); },
                 [](SimConfig& c, const std::string& v) {
                   c.sim.n_list.clear();
                   for (const auto& s : split_list(v))
                     c.sim.n_list.push_back(static_cast<int>(parse_int("sim.n_list", s)));
                 }});
    e.push_back(int_entry("sim.threads", XR_REF(sim.threads)));
    // output
    e.push_back({"output.dir", [](const SimConfig& c) { return c.output.dir; },
                 [](SimConfig& c, const std::string& v) { c.output.dir = v; }});
    e.push_back(bool_entry("output.packet_trace", XR_REF(output.packet_trace)));
    e.push_back(bool_entry("output.link_dump", XR_REF(output.link_dump)));
    return e;
  }();
  return entries;
}

#undef XR_REF

const Entry& find_entry(const std::string& key) {
  const auto& reg = registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const Entry& e) { return e.key == key; });
  if (it == reg.end()) throw ConfigError("unknown configuration key '" + key + "'", {key});
  return *it;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& e : registry()) out.push_back(e.key);
  return out;
}

std::string config_get(const SimConfig& cfg, const std::string& key) { return find_entry(key).get(cfg); }

void config_set(SimConfig& cfg, const std::string& key, const std::string& value) {
  find_entry(key).set(cfg, value);
}

void apply_override(SimConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override must look like section.key=value: '" + assignment + "'");
  config_set(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

SimConfig parse_config_text(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream is(text);
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  SimConfig cfg;
  std::vector<std::string> unknown;
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      unknown.push_back(section);
      continue;
    }
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      try {
        config_set(cfg, full, value.get_value<std::string>());
      } catch (const ConfigError& e) {
        if (e.keys().empty()) throw;
        unknown.insert(unknown.end(), e.keys().begin(), e.keys().end());
      }
    }
  }
  if (!unknown.empty()) {
    std::string msg = "bad configuration keys:";
    for (const auto& k : unknown) msg += " " + k;
    throw ConfigError(msg, unknown);
  }
  return cfg;
}

SimConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_ini(const SimConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const auto& e : registry()) {
    const auto dot = e.key.find('.');
    const std::string sec = e.key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) os << "\n";
      os << "[" << sec << "]\n";
      section = sec;
    }
    os << e.key.substr(dot + 1) << " = " << e.get(cfg) << "\n";
  }
  return os.str();
}

std::string config_header_lines(const SimConfig& cfg, const std::string& prefix) {
  std::ostringstream os;
  for (const auto& e : registry()) os << prefix << e.key << "=" << e.get(cfg) << "\n";
  return os.str();
}

}  // namespace xrsim
