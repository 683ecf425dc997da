#include "xrsim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "xrsim/errors.hpp"

namespace xrsim {

namespace {

constexpr double kSizeStdFraction = 0.105;
constexpr double kSizeMinFraction = 0.5;
constexpr double kSizeMaxFraction = 1.5;

bool supported_fps(double fps) {
  return fps == 30.0 || fps == 60.0 || fps == 90.0 || fps == 120.0;
}

TruncGaussSpec video_size_spec(double mean) {
  return {mean, kSizeStdFraction * mean, kSizeMinFraction * mean, kSizeMaxFraction * mean};
}

TruncGaussSpec constant_size(double bytes) { return {bytes, 0.0, bytes, bytes}; }

// Sub-stream tags inside one traffic stream.
constexpr std::uint64_t kSizeTag = 1;
constexpr std::uint64_t kJitterTag = 2;
constexpr std::uint64_t kOffsetTag = 3;
constexpr std::uint64_t kStreamTag = 4;

}  // namespace

std::string to_string(Service s) {
  switch (s) {
    case Service::VR: return "VR";
    case Service::AR: return "AR";
    case Service::CG: return "CG";
  }
  return "?";
}

std::string to_string(StreamKind k) {
  switch (k) {
    case StreamKind::video: return "video";
    case StreamKind::motion_control: return "motion";
    case StreamKind::audio_data: return "audio";
  }
  return "?";
}

std::string to_string(Direction d) { return d == Direction::DL ? "DL" : "UL"; }

Service parse_service(const std::string& text) {
  if (text == "VR" || text == "vr") return Service::VR;
  if (text == "AR" || text == "ar") return Service::AR;
  if (text == "CG" || text == "cg") return Service::CG;
  throw ConfigError("unknown service '" + text + "' (expected VR, AR or CG)");
}

std::string StreamConfig::label() const {
  std::ostringstream os;
  os << to_string(direction) << '_' << to_string(kind);
  if (stride > 1) os << '_' << phase;
  return os.str();
}

TruncGaussSpec default_jitter() { return {0.0, 2.0, -4.0, 4.0}; }

StreamConfig build_video_stream(Service service, Direction direction, double fps,
                                double avg_rate_bps, std::optional<TruncGaussSpec> jitter) {
  if (!supported_fps(fps))
    throw ConfigError("video fps must be one of 30, 60, 90, 120", {"traffic.fps"});
  if (!(avg_rate_bps > 0.0)) throw ConfigError("video rate must be positive");

  StreamConfig cfg;
  cfg.kind = StreamKind::video;
  cfg.direction = direction;
  cfg.fps = fps;
  cfg.avg_rate_bps = avg_rate_bps;
  if (direction == Direction::DL) {
    cfg.pdb_ms = service == Service::CG ? 15.0 : 10.0;
  } else {
    if (service != Service::AR)
      throw ConfigError("uplink video is only defined for AR");
    cfg.pdb_ms = 30.0;
  }
  cfg.size_bytes = video_size_spec(avg_rate_bps / (fps * 8.0));
  if (jitter) {
    jitter->validate();
    cfg.jitter_ms = jitter;
  }
  return cfg;
}

StreamConfig build_motion_stream() {
  StreamConfig cfg;
  cfg.kind = StreamKind::motion_control;
  cfg.direction = Direction::UL;
  cfg.fps = 250.0;
  cfg.avg_rate_bps = 100.0 * 8.0 * 250.0;
  cfg.pdb_ms = 10.0;
  cfg.size_bytes = constant_size(100.0);
  return cfg;
}

StreamConfig build_audio_stream(Service service, Direction direction, double avg_rate_bps) {
  if (direction == Direction::UL && service != Service::AR)
    throw ConfigError("uplink audio+data is only defined for AR");
  if (!(avg_rate_bps > 0.0)) throw ConfigError("audio rate must be positive");
  StreamConfig cfg;
  cfg.kind = StreamKind::audio_data;
  cfg.direction = direction;
  cfg.fps = 100.0;
  cfg.avg_rate_bps = avg_rate_bps;
  cfg.pdb_ms = 30.0;
  cfg.size_bytes = constant_size(avg_rate_bps / (cfg.fps * 8.0));
  return cfg;
}

std::pair<StreamConfig, StreamConfig> split_multi_stream(const StreamConfig& cfg,
                                                         bool allow_nested) {
  if (cfg.kind != StreamKind::video)
    throw ConfigError("multi-stream split applies to video streams only");
  if (cfg.stride > 1 && !allow_nested)
    throw ConfigError("stream is already split; nested split not allowed");

  StreamConfig a = cfg;
  a.fps = 2.0 * cfg.fps;
  a.stride = 2 * cfg.stride;
  a.avg_rate_bps = cfg.avg_rate_bps / 2.0;
  a.size_bytes = video_size_spec(cfg.size_bytes.mean / 2.0);
  a.phase = cfg.phase;
  StreamConfig b = a;
  b.phase = cfg.phase + cfg.stride;
  return {a, b};
}

std::vector<Packet> generate_arrivals(const StreamConfig& cfg, RngStream& rng, double horizon_ms,
                                      double offset_ms, std::uint32_t ue_id,
                                      std::uint32_t stream_id) {
  cfg.size_bytes.validate();
  std::vector<Packet> out;
  if (!(horizon_ms > 0.0)) return out;

  RngStream size_rng = rng.derive(kSizeTag);
  RngStream jitter_rng = rng.derive(kJitterTag);
  const double period = cfg.period_ms();
  const double early = cfg.jitter_ms ? cfg.jitter_ms->min : 0.0;
  out.reserve(static_cast<std::size_t>(horizon_ms / (period * cfg.stride)) + 2);

  for (std::uint64_t k = 0;; ++k) {
    const double nominal =
        offset_ms + static_cast<double>(cfg.stride * k + cfg.phase) * period;
    if (nominal + early >= horizon_ms) break;
    const double arrival =
        cfg.jitter_ms ? nominal + sample_trunc_gauss(jitter_rng, *cfg.jitter_ms, cfg.truncation)
                      : nominal;
    const double size = std::round(sample_trunc_gauss(size_rng, cfg.size_bytes, cfg.truncation));
    if (arrival < 0.0 || arrival >= horizon_ms) continue;

    Packet p;
    p.packet_id = static_cast<std::uint32_t>(out.size());
    p.ue_id = ue_id;
    p.stream_id = stream_id;
    p.size_bytes = static_cast<std::uint32_t>(std::max(1.0, size));
    p.arrival_ms = arrival;
    p.deadline_ms = arrival + cfg.pdb_ms;
    out.push_back(p);
  }
  return out;
}

SessionTemplate make_session_template(Service service, const SessionOptions& opts) {
  SessionTemplate t;
  t.service = service;
  t.multi_stream_video = opts.multi_stream_video;
  t.include_audio = opts.include_audio;

  auto add_video = [&](Direction dir, double rate, bool jitter, int group) {
    StreamConfig v = build_video_stream(service, dir, opts.fps, rate,
                                        jitter ? std::optional(opts.jitter) : std::nullopt);
    v.truncation = opts.truncation;
    v.offset_group = group;
    if (opts.multi_stream_video) {
      auto [a, b] = split_multi_stream(v);
      t.streams.push_back(a);
      t.streams.push_back(b);
    } else {
      t.streams.push_back(v);
    }
  };

  int group = 0;
  add_video(Direction::DL, opts.dl_video_rate_bps, opts.dl_video_jitter, group++);
  t.streams.push_back(build_motion_stream());
  t.streams.back().offset_group = group++;
  if (service == Service::AR) add_video(Direction::UL, opts.ul_video_rate_bps, opts.ul_video_jitter, group++);
  if (opts.include_audio) {
    t.streams.push_back(build_audio_stream(service, Direction::DL, opts.dl_audio_rate_bps));
    t.streams.back().offset_group = group++;
    if (opts.include_ul_audio && service == Service::AR) {
      t.streams.push_back(build_audio_stream(service, Direction::UL, opts.ul_audio_rate_bps));
      t.streams.back().offset_group = group++;
    }
  }
  return t;
}

std::vector<std::vector<Packet>> generate_session(const SessionTemplate& tmpl, std::uint32_t ue_id,
                                                  const RngStream& rng, double horizon_ms) {
  std::vector<std::vector<Packet>> out(tmpl.streams.size());
  if (!(horizon_ms > 0.0)) return out;

  // Offsets are keyed by group so both members of a split pair share one.
  auto offset_for = [&](const StreamConfig& s, std::size_t index) {
    const std::uint64_t key = s.offset_group >= 0 ? static_cast<std::uint64_t>(s.offset_group)
                                                  : 1000 + index;
    RngStream r = rng.derive(make_stream_id({kOffsetTag, key}));
    return r.uniform() * s.stride * s.period_ms();
  };

  for (std::size_t i = 0; i < tmpl.streams.size(); ++i) {
    const auto& s = tmpl.streams[i];
    RngStream stream_rng = rng.derive(make_stream_id({kStreamTag, i}));
    out[i] = generate_arrivals(s, stream_rng, horizon_ms, offset_for(s, i), ue_id,
                               static_cast<std::uint32_t>(i));
  }
  return out;
}

}  // namespace xrsim
