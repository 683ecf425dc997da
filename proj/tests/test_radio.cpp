#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "xrsim/deployment.hpp"
#include "xrsim/errors.hpp"
#include "xrsim/radio.hpp"

using namespace xrsim;

namespace {

// Straight transcription of the UMa/InH formulas, kept separate from the
// library code on purpose.
double ref_uma_los(double d2d, double hbs, double hut, double fc) {
  const double d3d = std::hypot(d2d, hbs - hut);
  const double dbp = 4.0 * (hbs - 1.0) * (hut - 1.0) * fc * 1e9 / 3e8;
  if (d2d <= dbp) return 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc);
  return 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) -
         9.0 * std::log10(dbp * dbp + (hbs - hut) * (hbs - hut));
}

double ref_uma_nlos(double d2d, double hbs, double hut, double fc) {
  const double d3d = std::hypot(d2d, hbs - hut);
  const double nlos = 13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(fc) - 0.6 * (hut - 1.5);
  return std::max(nlos, ref_uma_los(d2d, hbs, hut, fc));
}

double ref_inh(double d3d, double fc, bool los) {
  const double l = 32.4 + 17.3 * std::log10(d3d) + 20.0 * std::log10(fc);
  if (los) return l;
  return std::max(l, 17.3 + 38.3 * std::log10(d3d) + 24.9 * std::log10(fc));
}

}  // namespace

TEST_CASE("FR profiles") {
  const auto fr1 = make_fr_profile(FrequencyRange::FR1, DeploymentKind::DU);
  CHECK(fr1.carrier_ghz == 4.0);
  CHECK(fr1.n_prb == 273);
  CHECK(fr1.slot_ms == 0.5);
  CHECK(fr1.bs_tx_power_dbm == 51.0);
  CHECK(make_fr_profile(FrequencyRange::FR1, DeploymentKind::InH).bs_tx_power_dbm == 31.0);
  const auto fr2 = make_fr_profile(FrequencyRange::FR2, DeploymentKind::InH);
  CHECK(fr2.carrier_ghz == 30.0);
  CHECK(fr2.n_prb == 66);
  CHECK(fr2.slot_ms == 0.125);
  CHECK(fr2.prb_bandwidth_hz() == doctest::Approx(1.44e6));
}

TEST_CASE("pathloss matches an independent transcription") {
  for (double d : {10.0, 35.0, 80.0, 150.0, 400.0, 1500.0}) {
    for (double hut : {1.5, 10.5, 22.5}) {
      CAPTURE(d);
      CAPTURE(hut);
      CHECK(uma_pathloss_db(d, 25.0, hut, 4.0, true) == doctest::Approx(ref_uma_los(d, 25.0, hut, 4.0)));
      CHECK(uma_pathloss_db(d, 25.0, hut, 4.0, false) == doctest::Approx(ref_uma_nlos(d, 25.0, hut, 4.0)));
    }
  }
  for (double d : {1.0, 5.0, 20.0, 60.0}) {
    CHECK(inh_pathloss_db(d, 4.0, true) == doctest::Approx(ref_inh(d, 4.0, true)));
    CHECK(inh_pathloss_db(d, 30.0, false) == doctest::Approx(ref_inh(d, 30.0, false)));
  }
}

TEST_CASE("pathloss grows with distance and carrier frequency") {
  double prev_l = 0.0, prev_n = 0.0;
  for (double d = 10.0; d <= 2000.0; d *= 1.2) {
    const double l = uma_pathloss_db(d, 25.0, 1.5, 4.0, true);
    const double n = uma_pathloss_db(d, 25.0, 1.5, 4.0, false);
    CHECK(l > prev_l);
    CHECK(n >= prev_n);
    CHECK(n >= l);
    prev_l = l;
    prev_n = n;
    CHECK(uma_pathloss_db(d, 25.0, 1.5, 30.0, false) > n);
  }
  for (double d = 1.0; d <= 100.0; d += 3.0)
    CHECK(inh_pathloss_db(d, 30.0, true) > inh_pathloss_db(d, 4.0, true));
}

TEST_CASE("LOS probability is a decreasing probability") {
  double prev = 1.0;
  for (double d = 1.0; d < 1000.0; d += 1.0) {
    const double p = uma_los_probability(d, 1.5);
    CHECK(p >= 0.0);
    CHECK(p <= prev + 1e-12);
    prev = p;
  }
  CHECK(uma_los_probability(10.0, 1.5) == 1.0);
  CHECK(inh_los_probability(1.0) == 1.0);
  CHECK(inh_los_probability(6.5) == doctest::Approx(0.32).epsilon(0.01));
  // UEs on high floors see more LOS at mid range.
  CHECK(uma_los_probability(100.0, 22.5) > uma_los_probability(100.0, 1.5));
}

TEST_CASE("pathloss clamps below the model minimum") {
  const auto near = pathloss(PathlossModel::UMa, 2.0, 25.0, 1.5, 4.0, 0.0);
  const auto at = pathloss(PathlossModel::UMa, 10.0, 25.0, 1.5, 4.0, 0.0);
  CHECK(near.pathloss_db == at.pathloss_db);
  CHECK(near.los);
  const auto inh = pathloss(PathlossModel::InH, 0.0, 1.5, 1.5, 4.0, 0.0);
  CHECK(inh.pathloss_db == doctest::Approx(ref_inh(1.0, 4.0, true)));
}

TEST_CASE("RSRP from transmit power, PRB count and coupling gain") {
  // 51 dBm spread over 273 * 12 subcarriers, 100 dB loss, 5 dBi antenna.
  const double expected = 51.0 - 10.0 * std::log10(3276.0) + (-100.0 + 5.0);
  CHECK(rsrp_dbm(51.0, 273, -95.0) == doctest::Approx(expected));
  CHECK(expected == doctest::Approx(-79.153).epsilon(1e-4));
}

TEST_CASE("SINR combines interferers and noise in linear units") {
  const double s = db_to_linear(-70.0);
  const std::vector<double> i{db_to_linear(-80.0), db_to_linear(-83.0)};
  const double n = db_to_linear(-90.0);
  const auto r = sinr(s, i, n, Direction::DL, 7);
  const double ref = -70.0 - 10.0 * std::log10(1e-8 + std::pow(10.0, -8.3) + 1e-9);
  CHECK(r.sinr_db == doctest::Approx(ref));
  CHECK(r.slot == 7);
  CHECK(sinr(s, {}, n, Direction::UL).sinr_db == doctest::Approx(20.0));
  // kT over 100 MHz with a 9 dB noise figure.
  CHECK(noise_dbm(100e6, 9.0) == doctest::Approx(-85.0));
}

TEST_CASE("spectral efficiency and transport blocks") {
  CHECK(spectral_efficiency(0.0) == doctest::Approx(0.75));
  CHECK(spectral_efficiency(60.0) == 7.4063);
  CHECK(spectral_efficiency(-400.0) == 0.0);
  double prev = 0.0;
  for (double x = -10.0; x < 40.0; x += 0.5) {
    const double se = spectral_efficiency(x);
    CHECK(se >= prev);
    prev = se;
  }

  RadioParams rp;
  const auto fr1 = make_fr_profile(FrequencyRange::FR1, DeploymentKind::InH);
  CHECK(data_symbols(SlotKind::D, rp) == 12);
  CHECK(data_symbols(SlotKind::U, rp) == 12);
  CHECK(data_symbols(SlotKind::S, rp) == 8);
  CHECK(transport_block_bits(4.0, 100, fr1, SlotKind::D, rp) == 57600);
  CHECK(transport_block_bits(4.0, 100, fr1, SlotKind::S, rp) == 38400);
  CHECK(transport_block_bits(4.0, 0, fr1, SlotKind::D, rp) == 0);
  CHECK_THROWS_AS(transport_block_bits(4.0, 274, fr1, SlotKind::D, rp), InvariantViolation);
}

TEST_CASE("block error rates") {
  RadioParams rp;
  RngStream rng(99, 4);
  const int n = 1000000;
  int first_fail = 0, retx_fail = 0;
  for (int i = 0; i < n; ++i) {
    if (!tx_outcome(rng, 0, rp)) ++first_fail;
    if (!tx_outcome(rng, 1, rp)) ++retx_fail;
  }
  CHECK(std::abs(first_fail / double(n) - 0.10) < 0.002);
  CHECK(std::abs(retx_fail / double(n) - 0.01) < 0.0005);
}

TEST_CASE("channel map: shadowing spread and site correlation") {
  const Layout l = build_layout(DeploymentKind::DU);
  const auto ues = drop_users(l, 40, RngStream(1, 0));
  const auto prof = make_fr_profile(FrequencyRange::FR1, DeploymentKind::DU);
  RadioParams rp;
  const ChannelMap ch(l, ues, prof, rp, RngStream(1, 0));
  CHECK(ch.n_cells() == 21);
  CHECK(ch.n_ues() == ues.size());

  // Normalized shadowing of sites 1 and 2 for the same UE: correlation 0.5.
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  double s2 = 0.0;
  std::size_t n = 0;
  for (std::size_t u = 0; u < ues.size(); ++u) {
    const auto& a = ch.link(3, u);  // site 1
    const auto& b = ch.link(6, u);  // site 2
    const double za = a.shadowing_db / shadowing_sigma_db(PathlossModel::UMa, a.los);
    const double zb = b.shadowing_db / shadowing_sigma_db(PathlossModel::UMa, b.los);
    sxy += za * zb;
    sxx += za * za;
    syy += zb * zb;
    s2 += za * za;
    ++n;
    // Sectors of one site share the shadowing draw.
    CHECK(ch.link(3, u).los == ch.link(4, u).los);
    CHECK(ch.link(3, u).shadowing_db == ch.link(5, u).shadowing_db);
  }
  CHECK(sxy / std::sqrt(sxx * syy) == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::sqrt(s2 / n) == doctest::Approx(1.0).epsilon(0.05));

  // Coupling gain is the sum of its parts.
  const auto& ls = ch.link(0, 0);
  CHECK(ls.coupling_gain_db ==
        doctest::Approx(-ls.pathloss_db - ls.shadowing_db + ls.bs_gain_dbi + ls.ue_gain_dbi));
}

TEST_CASE("outdoor-to-indoor loss applies to indoor DU UEs only") {
  CHECK(o2i_wall_loss_db(4.0) > 5.0);
  CHECK(o2i_wall_loss_db(30.0) > o2i_wall_loss_db(4.0));

  const Layout l = build_layout(DeploymentKind::DU);
  const auto ues = drop_users(l, 30, RngStream(2, 0));
  const auto prof = make_fr_profile(FrequencyRange::FR1, DeploymentKind::DU);
  RadioParams with, without;
  without.o2i_penetration = false;
  const ChannelMap a(l, ues, prof, with, RngStream(2, 0));
  const ChannelMap b(l, ues, prof, without, RngStream(2, 0));
  for (std::size_t u = 0; u < ues.size(); ++u) {
    const double diff = a.link(0, u).pathloss_db - b.link(0, u).pathloss_db;
    if (ues[u].indoor)
      CHECK(diff >= 0.0);
    else
      CHECK(diff == 0.0);
  }
}

TEST_CASE("antenna pattern") {
  Cell c;
  c.height_m = 25.0;
  c.downtilt_deg = 12.0;
  c.azimuth_deg = 30.0;
  const Vec2 site{0.0, 0.0};
  // Boresight at the tilt angle gets the full gain.
  const double d = 25.0 / std::tan(12.0 * 3.14159265358979 / 180.0);
  const Vec3 on_axis{d * std::cos(0.5236), d * std::sin(0.5236), 0.0};
  CHECK(bs_antenna_gain_dbi(c, site, on_axis, 8.0) == doctest::Approx(8.0).epsilon(1e-3));
  // Behind the sector: attenuation saturates at 30 dB.
  const Vec3 behind{-d * std::cos(0.5236), -d * std::sin(0.5236), 0.0};
  CHECK(bs_antenna_gain_dbi(c, site, behind, 8.0) == doctest::Approx(-22.0));
  // Ceiling mounts have no azimuth dependence.
  c.downtilt_deg = 90.0;
  c.height_m = 3.0;
  CHECK(bs_antenna_gain_dbi(c, site, {5.0, 0.0, 1.5}, 5.0) ==
        doctest::Approx(bs_antenna_gain_dbi(c, site, {-5.0, 0.0, 1.5}, 5.0)));
}
