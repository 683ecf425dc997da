#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "xrsim/deployment.hpp"
#include "xrsim/errors.hpp"

using namespace xrsim;

TEST_CASE("DU layout: 7 sites, 21 cells, 200 m grid") {
  const Layout l = build_layout(DeploymentKind::DU);
  CHECK(l.cells.size() == 21);
  CHECK(l.n_sites() == 7);
  std::set<std::uint32_t> ids;
  for (const auto& c : l.cells) ids.insert(c.cell_id);
  CHECK(ids.size() == 21);

  // Every outer site is one ISD from the centre one; neighbours are one ISD apart.
  for (const auto& c : l.cells) {
    if (c.site_id == 0) continue;
    CHECK(distance_2d(c.site, {0.0, 0.0}) == doctest::Approx(200.0));
  }
  for (const auto& c : l.cells) {
    CHECK(c.height_m == 25.0);
    CHECK(c.downtilt_deg == 12.0);
  }
  // The 7-site cluster repeats every ISD * sqrt(7).
  for (const auto& s : l.wrap_shifts) CHECK(std::hypot(s.x, s.y) == doctest::Approx(200.0 * std::sqrt(7.0)));
}

TEST_CASE("InH layout: 12 ceiling cells 20 m apart in a 120 x 50 hall") {
  const Layout l = build_layout(DeploymentKind::InH);
  CHECK(l.cells.size() == 12);
  CHECK(l.n_sites() == 12);
  CHECK(l.bounds_max.x - l.bounds_min.x == 120.0);
  CHECK(l.bounds_max.y - l.bounds_min.y == 50.0);
  for (const auto& c : l.cells) {
    CHECK(c.height_m == 3.0);
    double nearest = 1e9;
    for (const auto& o : l.cells)
      if (o.cell_id != c.cell_id) nearest = std::min(nearest, distance_2d(c.site, o.site));
    CHECK(nearest == doctest::Approx(20.0));
  }
}

TEST_CASE("drops land in their own cell area with stable ids") {
  for (auto kind : {DeploymentKind::DU, DeploymentKind::InH}) {
    const Layout l = build_layout(kind);
    const auto ues = drop_users(l, 5, RngStream(3, 0));
    REQUIRE(ues.size() == l.cells.size() * 5);
    for (std::size_t i = 0; i < ues.size(); ++i) {
      const auto& u = ues[i];
      CHECK(u.ue_id == i);
      CHECK(u.drop_cell == i / 5);
      CHECK(u.drop_index == i % 5);
      CHECK(in_cell_area(l, l.cells[u.drop_cell], {u.position.x, u.position.y}));
    }
  }
  CHECK(drop_users(build_layout(DeploymentKind::InH), 0, RngStream(1, 0)).empty());
  CHECK_THROWS_AS(drop_users(build_layout(DeploymentKind::InH), -1, RngStream(1, 0)), ConfigError);
}

TEST_CASE("a UE's drop does not depend on how many UEs share the cell") {
  const Layout l = build_layout(DeploymentKind::DU);
  const auto small = drop_users(l, 3, RngStream(8, 0));
  const auto large = drop_users(l, 10, RngStream(8, 0));
  for (const auto& u : small) {
    const auto& v = large[u.drop_cell * 10 + u.drop_index];
    CHECK(u.position.x == v.position.x);
    CHECK(u.position.y == v.position.y);
    CHECK(u.position.z == v.position.z);
  }
}

TEST_CASE("DU outdoor share and floor heights") {
  const Layout l = build_layout(DeploymentKind::DU);
  const auto ues = drop_users(l, 200, RngStream(5, 0));
  std::size_t outdoor = 0;
  std::vector<int> floors(9, 0);
  for (const auto& u : ues) {
    if (!u.indoor) {
      ++outdoor;
      CHECK(u.position.z == 1.5);
      CHECK_FALSE(u.floor.has_value());
    } else {
      REQUIRE(u.floor.has_value());
      CHECK(*u.floor >= 1);
      CHECK(*u.floor <= 8);
      CHECK(u.position.z == doctest::Approx(1.5 + 3.0 * (*u.floor - 1)));
      ++floors[*u.floor];
    }
    CHECK(distance_2d({u.position.x, u.position.y}, l.cells[u.drop_cell].site) >= 10.0);
  }
  const double p = static_cast<double>(outdoor) / ues.size();
  // 4200 Bernoulli(0.2) draws: 4 sigma is about 0.025.
  CHECK(std::abs(p - 0.2) < 0.025);
  for (int f = 1; f <= 8; ++f) CHECK(floors[f] > 0);
}

TEST_CASE("InH drops are uniform over the cell rectangle (chi-square)") {
  const Layout l = build_layout(DeploymentKind::InH);
  const int n = 1000;
  const auto ues = drop_users(l, n, RngStream(6, 0));
  // 4 x 5 grid over each 20 x 25 m cell rectangle, pooled over cells.
  const int bx = 4, by = 5;
  std::vector<double> counts(bx * by, 0.0);
  for (const auto& u : ues) {
    const Cell& c = l.cells[u.drop_cell];
    const double fx = (u.position.x - (c.site.x - 10.0)) / 20.0;
    const double y0 = c.site.y < 25.0 ? 0.0 : 25.0;
    const double fy = (u.position.y - y0) / 25.0;
    const int ix = std::min(bx - 1, static_cast<int>(fx * bx));
    const int iy = std::min(by - 1, static_cast<int>(fy * by));
    counts[iy * bx + ix] += 1.0;
  }
  const double expected = static_cast<double>(ues.size()) / counts.size();
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 19 degrees of freedom; the 0.999 quantile is 43.8.
  CHECK(chi2 < 43.8);
}

TEST_CASE("DU drops are uniform over the hexagon") {
  const Layout l = build_layout(DeploymentKind::DU);
  const auto ues = drop_users(l, 1000, RngStream(7, 0));
  const double r = 200.0 / 3.0;
  // Share inside the concentric hexagon of half the radius: a quarter of the
  // area, corrected for the 10 m exclusion disc (a third of it lies in the
  // hexagon, at the site corner).
  const double hex_area = 1.5 * std::sqrt(3.0) * r * r;
  const double excluded = std::numbers::pi * 100.0 / 3.0;
  const double p = 0.25 * hex_area / (hex_area - excluded);
  std::size_t inner = 0;
  for (const auto& u : ues) {
    Cell probe = l.cells[u.drop_cell];
    Layout half = l;
    half.isd_m = l.isd_m / 2.0;
    if (in_cell_area(half, probe, {u.position.x, u.position.y})) ++inner;
  }
  const double n = static_cast<double>(ues.size());
  const double sigma = std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(inner / n - p) < 4.0 * sigma);
}

TEST_CASE("wraparound keeps every UE within one cell radius of some site image") {
  const Layout l = build_layout(DeploymentKind::DU);
  const auto ues = drop_users(l, 50, RngStream(2, 0));
  const double hex_radius = 200.0 / std::sqrt(3.0);
  for (const auto& u : ues) {
    const Vec2 p{u.position.x, u.position.y};
    double best = 1e9;
    for (const auto& c : l.cells) best = std::min(best, distance_2d(l.nearest_site_image(c, p), p));
    CHECK(best <= hex_radius + 1e-6);
  }
  // Without wraparound the image is the site itself.
  Layout flat = build_layout(DeploymentKind::DU, {false});
  const Vec2 far{1000.0, 1000.0};
  CHECK(flat.nearest_site_image(flat.cells[0], far).x == flat.cells[0].site.x);
}

TEST_CASE("cell selection agrees with a brute-force argmax") {
  RngStream rng(1, 1);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> v(1 + trial % 21);
    // Coarse values so ties occur.
    for (auto& x : v) x = std::floor(rng.uniform(-100.0, -95.0));
    std::uint32_t best = 0;
    for (std::uint32_t i = 0; i < v.size(); ++i)
      if (v[i] > v[best]) best = i;
    const double top = *std::max_element(v.begin(), v.end());
    std::uint32_t first_top = 0;
    while (v[first_top] != top) ++first_top;
    CHECK(select_cell(v) == best);
    CHECK(select_cell(v) == first_top);
  }
  CHECK_THROWS_AS(select_cell(std::vector<double>{}), InvariantViolation);
}
