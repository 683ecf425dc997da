#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xrsim/stochastics.hpp"

namespace xrsim {

enum class Service { VR, AR, CG };
enum class StreamKind { video, motion_control, audio_data };
enum class Direction { DL, UL };

std::string to_string(Service s);
std::string to_string(StreamKind k);
std::string to_string(Direction d);
Service parse_service(const std::string& text);

/// One stochastic XR flow.
///
/// A stream emits on the grid `offset + (stride * k + phase) * 1000 / fps`
/// ms. Ordinary streams have stride 1 and phase 0. A multi-stream video pair
/// shares a frame grid at twice the base frame rate and interleaves on it
/// (stride 2, phases 0 and 1), so each member carries half-size frames while
/// the pair keeps the original aggregate rate.
struct StreamConfig {
  StreamKind kind = StreamKind::video;
  Direction direction = Direction::DL;
  double fps = 60.0;
  double avg_rate_bps = 0.0;
  std::optional<TruncGaussSpec> jitter_ms;
  double pdb_ms = 10.0;
  /// Bytes. std == 0 with min == max == mean encodes a constant size.
  TruncGaussSpec size_bytes;
  int stride = 1;
  int phase = 0;
  /// Streams with the same non-negative group share one start offset.
  int offset_group = -1;
  Truncation truncation = Truncation::rejection;

  double packet_rate() const { return fps / stride; }
  double period_ms() const { return 1000.0 / fps; }
  std::string label() const;
};

/// Default jitter window: mean 0, std 2 ms, truncated to [-4, 4] ms.
TruncGaussSpec default_jitter();

/// Video stream with the Table-style packet-size law (mean = rate / (fps*8),
/// std 10.5 %, bounds 50 % .. 150 % of mean) and the per-service delay budget.
StreamConfig build_video_stream(Service service, Direction direction, double fps,
                                double avg_rate_bps,
                                std::optional<TruncGaussSpec> jitter = default_jitter());

/// Constant 100-byte, 250 packet/s uplink pose/control stream (10 ms budget).
StreamConfig build_motion_stream();

/// Constant-size audio+data stream at 100 packet/s, 30 ms budget.
StreamConfig build_audio_stream(Service service, Direction direction, double avg_rate_bps);

/// Splits a video stream into an interleaved pair: each member has half the
/// mean frame size and a doubled frame rate. Splitting an already split
/// stream throws unless `allow_nested`.
std::pair<StreamConfig, StreamConfig> split_multi_stream(const StreamConfig& cfg,
                                                         bool allow_nested = false);

struct Packet {
  std::uint32_t packet_id = 0;
  std::uint32_t ue_id = 0;
  std::uint32_t stream_id = 0;
  std::uint32_t size_bytes = 0;
  double arrival_ms = 0.0;
  double deadline_ms = 0.0;
  std::optional<double> completion_ms;
};

/// Arrivals in [0, horizon_ms). Sizes are rounded to whole bytes.
std::vector<Packet> generate_arrivals(const StreamConfig& cfg, RngStream& rng, double horizon_ms,
                                      double offset_ms = 0.0, std::uint32_t ue_id = 0,
                                      std::uint32_t stream_id = 0);

struct SessionTemplate {
  Service service = Service::VR;
  std::vector<StreamConfig> streams;
  bool multi_stream_video = false;
  bool include_audio = false;
};

struct SessionOptions {
  double fps = 60.0;
  double dl_video_rate_bps = 30e6;
  double ul_video_rate_bps = 10e6;
  bool multi_stream_video = false;
  bool include_audio = false;
  /// Adds the AR uplink audio+data stream; only meaningful with include_audio.
  bool include_ul_audio = false;
  double dl_audio_rate_bps = 0.756e6;
  double ul_audio_rate_bps = 1.12e6;
  TruncGaussSpec jitter = default_jitter();
  bool dl_video_jitter = true;
  bool ul_video_jitter = false;
  Truncation truncation = Truncation::rejection;
};

/// Baseline composition per service: DL video + UL motion, plus UL video for AR.
SessionTemplate make_session_template(Service service, const SessionOptions& opts = {});

/// One packet sequence per template stream. Each stream draws from its own
/// sub-stream of `rng`; every offset group gets a uniform start phase in one
/// frame period.
std::vector<std::vector<Packet>> generate_session(const SessionTemplate& tmpl, std::uint32_t ue_id,
                                                  const RngStream& rng, double horizon_ms);

}  // namespace xrsim
