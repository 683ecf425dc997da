#include "xrsim/deployment.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "xrsim/errors.hpp"

namespace xrsim {

namespace {

constexpr double kDuIsd = 200.0;
constexpr double kDuHeight = 25.0;
constexpr double kDuTilt = 12.0;
constexpr double kInhSpacing = 20.0;
constexpr double kInhHeight = 3.0;
constexpr double kInhTilt = 90.0;
constexpr double kHallLength = 120.0;
constexpr double kHallWidth = 50.0;
constexpr double kInhRowOffset = 10.0;

constexpr double deg(double d) { return d * std::numbers::pi / 180.0; }

Vec2 polar(double r, double angle_deg) {
  return {r * std::cos(deg(angle_deg)), r * std::sin(deg(angle_deg))};
}

// Pointy-top hexagon of circumradius r centered at the origin.
bool in_hexagon(Vec2 d, double r) {
  const double ax = std::fabs(d.x);
  const double ay = std::fabs(d.y);
  const double half_w = r * std::numbers::sqrt3 / 2.0;
  return ax <= half_w + 1e-9 && ay + ax / std::numbers::sqrt3 <= r + 1e-9;
}

Layout build_du(const LayoutOptions& opts) {
  Layout l;
  l.kind = DeploymentKind::DU;
  l.isd_m = kDuIsd;
  l.wraparound = opts.wraparound;

  // Sites sit on a hexagonal lattice with basis vectors at 30 and 90 degrees,
  // which keeps the sector hexagons (azimuths 30/150/270) tiling the plane.
  const Vec2 a1 = polar(kDuIsd, 30.0);
  const Vec2 a2 = polar(kDuIsd, 90.0);
  auto lattice = [&](double m, double n) { return Vec2{m * a1.x + n * a2.x, m * a1.y + n * a2.y}; };

  std::vector<Vec2> sites{{0.0, 0.0}};
  for (int k = 0; k < 6; ++k) sites.push_back(polar(kDuIsd, 30.0 + 60.0 * k));

  // Neighbouring images of the 7-site cluster: +/-(2,1), +/-(-1,3), +/-(3,-2).
  l.wrap_shifts = {lattice(2, 1),  lattice(-2, -1), lattice(-1, 3),
                   lattice(1, -3), lattice(3, -2),  lattice(-3, 2)};

  const double sector_r = kDuIsd / 3.0;
  const double azimuths[3] = {30.0, 150.0, 270.0};
  std::uint32_t id = 0;
  for (std::uint32_t s = 0; s < sites.size(); ++s) {
    for (double az : azimuths) {
      Cell c;
      c.cell_id = id++;
      c.site_id = s;
      c.site = sites[s];
      c.height_m = kDuHeight;
      c.azimuth_deg = az;
      c.downtilt_deg = kDuTilt;
      const Vec2 off = polar(sector_r, az);
      c.area_center = {c.site.x + off.x, c.site.y + off.y};
      l.cells.push_back(c);
    }
  }

  l.bounds_min = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  l.bounds_max = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  const double hw = sector_r * std::numbers::sqrt3 / 2.0;
  for (const auto& c : l.cells) {
    l.bounds_min.x = std::min(l.bounds_min.x, c.area_center.x - hw);
    l.bounds_min.y = std::min(l.bounds_min.y, c.area_center.y - sector_r);
    l.bounds_max.x = std::max(l.bounds_max.x, c.area_center.x + hw);
    l.bounds_max.y = std::max(l.bounds_max.y, c.area_center.y + sector_r);
  }
  return l;
}

Layout build_inh() {
  Layout l;
  l.kind = DeploymentKind::InH;
  l.isd_m = kInhSpacing;
  l.wraparound = false;
  l.bounds_min = {0.0, 0.0};
  l.bounds_max = {kHallLength, kHallWidth};

  const double rows[2] = {kHallWidth / 2.0 - kInhRowOffset, kHallWidth / 2.0 + kInhRowOffset};
  std::uint32_t id = 0;
  for (double y : rows) {
    for (int k = 0; k < 6; ++k) {
      Cell c;
      c.cell_id = id;
      c.site_id = id;
      ++id;
      c.site = {kInhSpacing / 2.0 + kInhSpacing * k, y};
      c.height_m = kInhHeight;
      c.azimuth_deg = 0.0;
      c.downtilt_deg = kInhTilt;
      c.area_center = c.site;
      l.cells.push_back(c);
    }
  }
  return l;
}

}  // namespace

std::string to_string(DeploymentKind k) { return k == DeploymentKind::DU ? "DU" : "InH"; }

DeploymentKind parse_deployment(const std::string& text) {
  if (text == "DU" || text == "du") return DeploymentKind::DU;
  if (text == "InH" || text == "inh" || text == "INH") return DeploymentKind::InH;
  throw ConfigError("unknown deployment '" + text + "' (expected DU or InH)",
                    {"scenario.deployment"});
}

double distance_2d(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::size_t Layout::n_sites() const {
  std::size_t n = 0;
  for (const auto& c : cells) n = std::max<std::size_t>(n, c.site_id + 1);
  return n;
}

Vec2 Layout::nearest_site_image(const Cell& cell, Vec2 p) const {
  Vec2 best = cell.site;
  if (!wraparound) return best;
  double best_d = distance_2d(best, p);
  for (const auto& s : wrap_shifts) {
    const Vec2 img{cell.site.x + s.x, cell.site.y + s.y};
    const double d = distance_2d(img, p);
    if (d < best_d) {
      best_d = d;
      best = img;
    }
  }
  return best;
}

Layout build_layout(DeploymentKind kind, const LayoutOptions& opts) {
  return kind == DeploymentKind::DU ? build_du(opts) : build_inh();
}

bool in_cell_area(const Layout& layout, const Cell& c, Vec2 p) {
  if (layout.kind == DeploymentKind::DU)
    return in_hexagon({p.x - c.area_center.x, p.y - c.area_center.y}, layout.isd_m / 3.0);
  const double half = layout.isd_m / 2.0;
  const double mid_y = (layout.bounds_min.y + layout.bounds_max.y) / 2.0;
  const bool lower = c.site.y < mid_y;
  const double y_lo = lower ? layout.bounds_min.y : mid_y;
  const double y_hi = lower ? mid_y : layout.bounds_max.y;
  return p.x >= c.site.x - half && p.x <= c.site.x + half && p.y >= y_lo && p.y <= y_hi;
}

std::vector<UserTerminal> drop_users(const Layout& layout, int n_per_cell, const RngStream& rng,
                                     const DropOptions& opts) {
  if (n_per_cell < 0) throw ConfigError("n_per_cell must be >= 0", {"scenario.n_ue_per_cell"});
  std::vector<UserTerminal> ues;
  ues.reserve(layout.cells.size() * static_cast<std::size_t>(n_per_cell));

  const bool du = layout.kind == DeploymentKind::DU;
  const double min_d = du ? opts.min_distance_du_m : opts.min_distance_inh_m;

  for (std::size_t ci = 0; ci < layout.cells.size(); ++ci) {
    const Cell& cell = layout.cells[ci];
    for (int k = 0; k < n_per_cell; ++k) {
      UserTerminal ue;
      ue.ue_id = static_cast<std::uint32_t>(ci * n_per_cell + k);
      ue.drop_cell = cell.cell_id;
      ue.drop_index = static_cast<std::uint32_t>(k);
      ue.serving_cell = cell.cell_id;
      RngStream r = rng.derive(make_stream_id(
          {static_cast<std::uint64_t>(RngPurpose::drop), ci, static_cast<std::uint64_t>(k)}));

      Vec2 p;
      if (du) {
        const double rad = layout.isd_m / 3.0;
        const double hw = rad * std::numbers::sqrt3 / 2.0;
        do {
          p = {cell.area_center.x + r.uniform(-hw, hw), cell.area_center.y + r.uniform(-rad, rad)};
        } while (!in_cell_area(layout, cell, p) || distance_2d(p, cell.site) < min_d);
      } else {
        const double half = layout.isd_m / 2.0;
        const double mid_y = (layout.bounds_min.y + layout.bounds_max.y) / 2.0;
        const bool lower = cell.site.y < mid_y;
        do {
          p = {r.uniform(cell.site.x - half, cell.site.x + half),
               lower ? r.uniform(layout.bounds_min.y, mid_y) : r.uniform(mid_y, layout.bounds_max.y)};
        } while (distance_2d(p, cell.site) < min_d);
      }

      double z = opts.ue_height_m;
      if (du) {
        ue.indoor = !r.bernoulli(opts.outdoor_probability);
        if (ue.indoor) {
          const int floor = 1 + static_cast<int>(r.uniform() * opts.n_floors);
          ue.floor = std::min(floor, opts.n_floors);
          z += opts.floor_height_m * (*ue.floor - 1);
        }
      } else {
        ue.indoor = true;
      }
      ue.position = {p.x, p.y, z};
      ues.push_back(ue);
    }
  }
  return ues;
}

std::uint32_t select_cell(std::span<const double> rsrp_dbm) {
  if (rsrp_dbm.empty()) throw InvariantViolation("cell selection over an empty cell list");
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < rsrp_dbm.size(); ++c)
    if (rsrp_dbm[c] > rsrp_dbm[best]) best = c;
  return best;
}

}  // namespace xrsim
