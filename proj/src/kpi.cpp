#include "xrsim/kpi.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "xrsim/errors.hpp"

namespace xrsim {

std::string to_string(StreamRule r) {
  return r == StreamRule::ALL_STREAMS ? "ALL_STREAMS" : "DL_VIDEO_ONLY";
}

StreamRule parse_stream_rule(const std::string& text) {
  if (text == "ALL_STREAMS") return StreamRule::ALL_STREAMS;
  if (text == "DL_VIDEO_ONLY") return StreamRule::DL_VIDEO_ONLY;
  throw ConfigError("unknown per-stream rule '" + text + "'", {"kpi.per_stream_rule"});
}

std::string to_string(Scope s) {
  switch (s) {
    case Scope::all: return "ALL";
    case Scope::DL: return "DL";
    case Scope::UL: return "UL";
  }
  return "?";
}

void SatisfactionConfig::validate() const {
  std::vector<std::string> bad;
  if (!(x_percent > 0.0 && x_percent <= 100.0)) bad.push_back("kpi.x_percent");
  if (!(y_percent > 0.0 && y_percent <= 100.0)) bad.push_back("kpi.y_percent");
  if (!bad.empty()) throw ConfigError("satisfaction thresholds must lie in (0, 100]", bad);
}

namespace {

bool in_scope(const DelayRecord& r, const SatisfactionConfig& cfg, Scope scope) {
  if (cfg.per_stream_rule == StreamRule::DL_VIDEO_ONLY &&
      !(r.direction == Direction::DL && r.kind == StreamKind::video))
    return false;
  if (scope == Scope::DL) return r.direction == Direction::DL;
  if (scope == Scope::UL) return r.direction == Direction::UL;
  return true;
}

}  // namespace

std::optional<bool> ue_satisfied(std::span<const DelayRecord> records_of_ue,
                                 const SatisfactionConfig& cfg, Scope scope) {
  // stream -> (on time, total)
  std::map<std::uint32_t, std::pair<std::size_t, std::size_t>> per_stream;
  for (const auto& r : records_of_ue) {
    if (!in_scope(r, cfg, scope)) continue;
    auto& [on_time, total] = per_stream[r.stream];
    ++total;
    if (r.on_time) ++on_time;
  }
  if (per_stream.empty()) return std::nullopt;
  for (const auto& [stream, counts] : per_stream) {
    const auto [on_time, total] = counts;
    // Strict: more than X percent.
    if (!(100.0 * static_cast<double>(on_time) > cfg.x_percent * static_cast<double>(total)))
      return false;
  }
  return true;
}

bool SatisfactionCount::meets(double y_percent) const {
  if (total == 0) return false;
  return 100.0 * static_cast<double>(satisfied) >= y_percent * static_cast<double>(total);
}

SatisfactionCount satisfied_fraction(std::span<const std::optional<bool>> verdicts) {
  SatisfactionCount c;
  for (const auto& v : verdicts) {
    if (!v) continue;
    ++c.total;
    if (*v) ++c.satisfied;
  }
  return c;
}

std::vector<UeVerdict> evaluate_ues(std::span<const DelayRecord> records,
                                    std::span<const std::uint32_t> ue_ids,
                                    const SatisfactionConfig& cfg) {
  std::unordered_map<std::uint32_t, std::vector<DelayRecord>> by_ue;
  for (const auto& r : records) by_ue[r.ue].push_back(r);

  std::vector<UeVerdict> out;
  out.reserve(ue_ids.size());
  for (auto id : ue_ids) {
    UeVerdict v;
    v.ue = id;
    auto it = by_ue.find(id);
    if (it != by_ue.end()) {
      v.all = ue_satisfied(it->second, cfg, Scope::all);
      v.dl = ue_satisfied(it->second, cfg, Scope::DL);
      v.ul = ue_satisfied(it->second, cfg, Scope::UL);
    } else {
      warn_once("kpi.no_packets", "UE without evaluated packets excluded from satisfaction counts");
    }
    out.push_back(v);
  }
  return out;
}

SatisfactionCount count_scope(std::span<const UeVerdict> verdicts, Scope scope) {
  std::vector<std::optional<bool>> v;
  v.reserve(verdicts.size());
  for (const auto& u : verdicts)
    v.push_back(scope == Scope::all ? u.all : scope == Scope::DL ? u.dl : u.ul);
  return satisfied_fraction(v);
}

namespace {

struct ScopeCapacity {
  int capacity = 0;
  std::optional<double> interpolated;
  bool has_data = false;
};

ScopeCapacity capacity_for(const std::vector<CurvePoint>& curve, Scope scope, double y) {
  ScopeCapacity out;
  const CurvePoint* last_pass = nullptr;
  for (const auto& p : curve) {
    if (p.scope != scope) continue;
    if (p.count.total > 0) out.has_data = true;
    if (p.count.meets(y) && p.n_per_cell > out.capacity) {
      out.capacity = p.n_per_cell;
      last_pass = &p;
    }
  }
  if (!last_pass) return out;
  for (const auto& p : curve) {
    if (p.scope != scope || p.n_per_cell <= last_pass->n_per_cell || p.count.meets(y)) continue;
    const double f_pass = last_pass->count.fraction();
    const double f_fail = p.count.fraction();
    const double t = f_pass > f_fail ? (f_pass - y / 100.0) / (f_pass - f_fail) : 0.0;
    out.interpolated = last_pass->n_per_cell + t * (p.n_per_cell - last_pass->n_per_cell);
    break;
  }
  return out;
}

}  // namespace

CapacityResult capacity_search(const SimFactory& factory, std::span<const int> n_range,
                               const SatisfactionConfig& cfg) {
  cfg.validate();
  if (n_range.empty()) throw ConfigError("capacity search needs a non-empty n range");
  if (!std::is_sorted(n_range.begin(), n_range.end()))
    throw ConfigError("capacity search n range must be ascending");

  CapacityResult res;
  for (int n : n_range) {
    const auto verdicts = factory(n);
    for (Scope s : {Scope::all, Scope::DL, Scope::UL})
      res.curve.push_back({n, s, count_scope(verdicts, s)});
  }
  const auto dl = capacity_for(res.curve, Scope::DL, cfg.y_percent);
  const auto ul = capacity_for(res.curve, Scope::UL, cfg.y_percent);
  res.capacity_dl = dl.capacity;
  res.capacity_ul = ul.capacity;
  res.interpolated_dl = dl.interpolated;
  res.interpolated_ul = ul.interpolated;
  res.capacity_all = capacity_for(res.curve, Scope::all, cfg.y_percent).capacity;
  // A direction with no evaluated streams (e.g. DL_VIDEO_ONLY leaves UL
  // empty) does not constrain the combined figure.
  if (dl.has_data && ul.has_data)
    res.combined = std::min(dl.capacity, ul.capacity);
  else
    res.combined = dl.has_data ? dl.capacity : ul.capacity;
  return res;
}

}  // namespace xrsim
