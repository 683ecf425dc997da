#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xrsim/traffic.hpp"

namespace xrsim {

/// Outcome of one application-layer packet. Unfinished packets carry an
/// infinite delay and on_time == false.
struct DelayRecord {
  std::uint32_t ue = 0;
  std::uint32_t stream = 0;
  std::uint32_t packet_id = 0;
  double arrival_ms = 0.0;
  double delay_ms = 0.0;
  bool on_time = false;
  Direction direction = Direction::DL;
  StreamKind kind = StreamKind::video;
};

enum class StreamRule { ALL_STREAMS, DL_VIDEO_ONLY };

std::string to_string(StreamRule r);
StreamRule parse_stream_rule(const std::string& text);

struct SatisfactionConfig {
  double x_percent = 99.0;
  double y_percent = 90.0;
  StreamRule per_stream_rule = StreamRule::ALL_STREAMS;

  void validate() const;
};

/// Which streams of a UE a satisfaction verdict looks at.
enum class Scope { all, DL, UL };

std::string to_string(Scope s);

/// Per-stream "more than X % on time" (strict) over the records selected by
/// `scope` and the per-stream rule; every evaluated stream must pass.
/// Returns nullopt when no record is in scope (UE excluded).
std::optional<bool> ue_satisfied(std::span<const DelayRecord> records_of_ue,
                                 const SatisfactionConfig& cfg, Scope scope = Scope::all);

struct SatisfactionCount {
  std::size_t satisfied = 0;
  std::size_t total = 0;

  double fraction() const { return total == 0 ? 0.0 : static_cast<double>(satisfied) / total; }
  /// "At least Y %" (inclusive).
  bool meets(double y_percent) const;
};

/// Excluded UEs (nullopt) are not counted.
SatisfactionCount satisfied_fraction(std::span<const std::optional<bool>> verdicts);

/// Per-UE verdicts of one run, one entry per scope.
struct UeVerdict {
  std::uint32_t ue = 0;
  std::optional<bool> all;
  std::optional<bool> dl;
  std::optional<bool> ul;
};

std::vector<UeVerdict> evaluate_ues(std::span<const DelayRecord> records,
                                    std::span<const std::uint32_t> ue_ids,
                                    const SatisfactionConfig& cfg);

SatisfactionCount count_scope(std::span<const UeVerdict> verdicts, Scope scope);

struct CurvePoint {
  int n_per_cell = 0;
  Scope scope = Scope::all;
  SatisfactionCount count;
};

struct CapacityResult {
  int capacity_dl = 0;
  int capacity_ul = 0;
  int capacity_all = 0;
  /// min(DL, UL).
  int combined = 0;
  /// Linear interpolation between the last passing and first failing n, DL
  /// and UL, reported alongside the integer figures.
  std::optional<double> interpolated_dl;
  std::optional<double> interpolated_ul;
  std::vector<CurvePoint> curve;
};

/// Pooled verdicts for one n (all seeds, all cells).
using SimFactory = std::function<std::vector<UeVerdict>(int n_per_cell)>;

/// Evaluates every n in `n_range` (ascending) and reports, per direction,
/// the largest n whose satisfied fraction meets Y.
CapacityResult capacity_search(const SimFactory& factory, std::span<const int> n_range,
                               const SatisfactionConfig& cfg);

}  // namespace xrsim
