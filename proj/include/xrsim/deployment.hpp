#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xrsim/stochastics.hpp"

namespace xrsim {

enum class DeploymentKind { DU, InH };

std::string to_string(DeploymentKind k);
DeploymentKind parse_deployment(const std::string& text);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance_2d(Vec2 a, Vec2 b);

struct Cell {
  std::uint32_t cell_id = 0;
  std::uint32_t site_id = 0;
  Vec2 site;
  double height_m = 25.0;
  double azimuth_deg = 0.0;
  double downtilt_deg = 12.0;
  /// Center of the cell's drop area.
  Vec2 area_center;
};

/// Static deployment geometry. For DU the 7-site cluster tiles the plane via
/// `wrap_shifts`; distance queries pick the nearest image when wraparound is on.
struct Layout {
  DeploymentKind kind = DeploymentKind::InH;
  std::vector<Cell> cells;
  Vec2 bounds_min;
  Vec2 bounds_max;
  bool wraparound = false;
  double isd_m = 20.0;
  std::vector<Vec2> wrap_shifts;

  std::size_t n_sites() const;
  /// Site position image closest to `p` (the site itself without wraparound).
  Vec2 nearest_site_image(const Cell& cell, Vec2 p) const;
};

struct LayoutOptions {
  bool wraparound = true;
};

Layout build_layout(DeploymentKind kind, const LayoutOptions& opts = {});

struct UserTerminal {
  std::uint32_t ue_id = 0;
  Vec3 position;
  bool indoor = true;
  std::optional<int> floor;
  double speed_kmh = 3.0;
  /// Cell whose area the UE was dropped in, and the UE's index within it.
  /// Together they key every per-UE random stream.
  std::uint32_t drop_cell = 0;
  std::uint32_t drop_index = 0;
  std::uint32_t serving_cell = 0;
};

struct DropOptions {
  double outdoor_probability = 0.2;
  int n_floors = 8;
  double floor_height_m = 3.0;
  double ue_height_m = 1.5;
  double min_distance_du_m = 10.0;
  double min_distance_inh_m = 0.0;
};

/// True when `p` lies inside cell `c`'s drop area.
bool in_cell_area(const Layout& layout, const Cell& c, Vec2 p);

/// `n_per_cell` UEs dropped uniformly in each cell's area. UE ids are
/// `cell_index * n_per_cell + k`, and each UE's draws come from its own
/// stream, so a UE's position does not depend on how many others exist.
std::vector<UserTerminal> drop_users(const Layout& layout, int n_per_cell, const RngStream& rng,
                                     const DropOptions& opts = {});

/// argmax of `rsrp_dbm[cell]`, ties to the lowest cell id.
std::uint32_t select_cell(std::span<const double> rsrp_dbm);

}  // namespace xrsim
