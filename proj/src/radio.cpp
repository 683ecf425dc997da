#include "xrsim/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "xrsim/errors.hpp"

namespace xrsim {

namespace {

constexpr double kSpeedOfLight = 3.0e8;
constexpr double kThermalNoiseDbmHz = -174.0;
constexpr double kPatternBeamwidthDeg = 65.0;
constexpr double kPatternMaxAttenuationDb = 30.0;
constexpr double kInhMinD3d = 1.0;
constexpr double kO2iIndoorMaxM = 25.0;
constexpr double kO2iSigmaDb = 4.4;

constexpr double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }

// Sub-stream tags inside a UE's channel stream.
constexpr std::uint64_t kCommonShadowTag = 0;
constexpr std::uint64_t kO2iTag = 1;
constexpr std::uint64_t kSiteTagBase = 16;

}  // namespace

std::string to_string(FrequencyRange fr) { return fr == FrequencyRange::FR1 ? "FR1" : "FR2"; }

FrequencyRange parse_fr(const std::string& text) {
  if (text == "FR1" || text == "fr1") return FrequencyRange::FR1;
  if (text == "FR2" || text == "fr2") return FrequencyRange::FR2;
  throw ConfigError("unknown frequency range '" + text + "' (expected FR1 or FR2)", {"scenario.fr"});
}

FrProfile make_fr_profile(FrequencyRange fr, DeploymentKind deployment) {
  FrProfile p;
  p.fr = fr;
  p.bandwidth_mhz = 100.0;
  p.ue_tx_power_dbm = 23.0;
  p.bs_antenna_gain_dbi = 5.0;
  if (fr == FrequencyRange::FR1) {
    p.carrier_ghz = 4.0;
    p.scs_khz = 30.0;
    p.n_prb = 273;
    p.slot_ms = 0.5;
    p.bs_noise_figure_db = 5.0;
    p.ue_noise_figure_db = 9.0;
    p.ue_antenna_gain_dbi = 0.0;
    p.bs_tx_power_dbm = deployment == DeploymentKind::DU ? 51.0 : 31.0;
  } else {
    p.carrier_ghz = 30.0;
    p.scs_khz = 120.0;
    p.n_prb = 66;
    p.slot_ms = 0.125;
    p.bs_noise_figure_db = 7.0;
    p.ue_noise_figure_db = 13.0;
    p.ue_antenna_gain_dbi = 5.0;
    p.bs_tx_power_dbm = deployment == DeploymentKind::DU ? 51.0 : 24.0;
  }
  return p;
}

char to_char(SlotKind k) {
  switch (k) {
    case SlotKind::D: return 'D';
    case SlotKind::S: return 'S';
    case SlotKind::U: return 'U';
  }
  return '?';
}

PathlossModel pathloss_model_for(DeploymentKind kind) {
  return kind == DeploymentKind::DU ? PathlossModel::UMa : PathlossModel::InH;
}

double uma_los_probability(double d2d, double h_ut) {
  if (d2d <= 18.0) return 1.0;
  const double c = h_ut <= 13.0 ? 0.0 : std::pow((h_ut - 13.0) / 10.0, 1.5);
  const double base = 18.0 / d2d + std::exp(-d2d / 63.0) * (1.0 - 18.0 / d2d);
  return base * (1.0 + c * 1.25 * std::pow(d2d / 100.0, 3.0) * std::exp(-d2d / 150.0));
}

double inh_los_probability(double d2d) {
  if (d2d <= 1.2) return 1.0;
  if (d2d < 6.5) return std::exp(-(d2d - 1.2) / 4.7);
  return std::exp(-(d2d - 6.5) / 32.6) * 0.32;
}

double uma_pathloss_db(double d2d, double h_bs, double h_ut, double fc, bool los) {
  const double dh = h_bs - h_ut;
  const double d3d = std::sqrt(d2d * d2d + dh * dh);
  // Effective environment height fixed at 1 m.
  const double d_bp = 4.0 * (h_bs - 1.0) * (h_ut - 1.0) * fc * 1e9 / kSpeedOfLight;
  double pl_los;
  if (d2d <= d_bp) {
    pl_los = 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc);
  } else {
    pl_los = 28.0 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc) -
             9.0 * std::log10(d_bp * d_bp + dh * dh);
  }
  if (los) return pl_los;
  const double pl_nlos =
      13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(fc) - 0.6 * (h_ut - 1.5);
  return std::max(pl_los, pl_nlos);
}

double inh_pathloss_db(double d3d, double fc, bool los) {
  const double pl_los = 32.4 + 17.3 * std::log10(d3d) + 20.0 * std::log10(fc);
  if (los) return pl_los;
  const double pl_nlos = 38.3 * std::log10(d3d) + 17.30 + 24.9 * std::log10(fc);
  return std::max(pl_los, pl_nlos);
}

double shadowing_sigma_db(PathlossModel model, bool los) {
  if (model == PathlossModel::UMa) return los ? 4.0 : 6.0;
  return los ? 3.0 : 8.03;
}

double o2i_wall_loss_db(double fc) {
  const double glass = 2.0 + 0.2 * fc;
  const double concrete = 5.0 + 4.0 * fc;
  return 5.0 - 10.0 * std::log10(0.3 * std::pow(10.0, -glass / 10.0) +
                                 0.7 * std::pow(10.0, -concrete / 10.0));
}

double bs_antenna_gain_dbi(const Cell& cell, Vec2 site_image, Vec3 ue, double max_gain_dbi) {
  const double dx = ue.x - site_image.x;
  const double dy = ue.y - site_image.y;
  const double d2d = std::hypot(dx, dy);
  // Zenith angle of the UE seen from the antenna: 90 is the horizon.
  const double zenith = 90.0 + rad_to_deg(std::atan2(cell.height_m - ue.z, d2d));
  const double v = (zenith - 90.0 - cell.downtilt_deg) / kPatternBeamwidthDeg;
  const double att_v = std::min(12.0 * v * v, kPatternMaxAttenuationDb);

  double att_h = 0.0;
  if (cell.downtilt_deg < 90.0) {
    double phi = rad_to_deg(std::atan2(dy, dx)) - cell.azimuth_deg;
    phi = std::remainder(phi, 360.0);
    const double h = phi / kPatternBeamwidthDeg;
    att_h = std::min(12.0 * h * h, kPatternMaxAttenuationDb);
  }
  return max_gain_dbi - std::min(att_v + att_h, kPatternMaxAttenuationDb);
}

PathlossResult pathloss(PathlossModel model, double d2d, double h_bs, double h_ut, double fc,
                        double los_uniform, double min_d2d) {
  if (model == PathlossModel::UMa) {
    if (d2d < min_d2d) {
      warn_once("pathloss.uma.min_distance",
                "UMa pathloss: 2D distance below model minimum, clamped");
      d2d = min_d2d;
    }
    const bool los = los_uniform < uma_los_probability(d2d, h_ut);
    return {uma_pathloss_db(d2d, h_bs, h_ut, fc, los), los};
  }
  const double dh = h_bs - h_ut;
  double d3d = std::sqrt(d2d * d2d + dh * dh);
  if (d3d < kInhMinD3d) {
    warn_once("pathloss.inh.min_distance", "InH pathloss: 3D distance below 1 m, clamped");
    d3d = kInhMinD3d;
  }
  const bool los = los_uniform < inh_los_probability(d2d);
  return {inh_pathloss_db(d3d, fc, los), los};
}

ChannelMap::ChannelMap(const Layout& layout, std::span<const UserTerminal> ues,
                       const FrProfile& profile, const RadioParams& params, const RngStream& rng)
    : n_cells_(layout.cells.size()), n_ues_(ues.size()), links_(n_cells_ * n_ues_) {
  const PathlossModel model = pathloss_model_for(layout.kind);
  const std::size_t n_sites = layout.n_sites();
  const double rho = params.shadowing_site_correlation;
  const double a = std::sqrt(rho);
  const double b = std::sqrt(1.0 - rho);
  const double wall_loss = o2i_wall_loss_db(profile.carrier_ghz);

  std::vector<double> site_z(n_sites);
  std::vector<double> site_u(n_sites);

  for (std::size_t u = 0; u < n_ues_; ++u) {
    const UserTerminal& ue = ues[u];
    const RngStream ue_rng = rng.derive(make_stream_id(
        {static_cast<std::uint64_t>(RngPurpose::channel), ue.drop_cell, ue.drop_index}));

    RngStream common = ue_rng.derive(kCommonShadowTag);
    const double z_common = common.standard_normal();

    double penetration = 0.0;
    if (layout.kind == DeploymentKind::DU && ue.indoor && params.o2i_penetration) {
      RngStream o2i = ue_rng.derive(kO2iTag);
      const double d_in = std::min(o2i.uniform(0.0, kO2iIndoorMaxM), o2i.uniform(0.0, kO2iIndoorMaxM));
      penetration = wall_loss + 0.5 * d_in + kO2iSigmaDb * o2i.standard_normal();
      penetration = std::max(penetration, 0.0);
    }

    for (std::size_t s = 0; s < n_sites; ++s) {
      RngStream sr = ue_rng.derive(kSiteTagBase + s);
      site_u[s] = sr.uniform();
      site_z[s] = sr.standard_normal();
    }

    const Vec2 ue_xy{ue.position.x, ue.position.y};
    for (std::size_t c = 0; c < n_cells_; ++c) {
      const Cell& cell = layout.cells[c];
      const Vec2 img = layout.nearest_site_image(cell, ue_xy);
      const double d2d = distance_2d(img, ue_xy);
      const PathlossResult pl = pathloss(model, d2d, cell.height_m, ue.position.z, profile.carrier_ghz,
                                         site_u[cell.site_id], params.min_distance_du_m);
      LinkState& ls = links_[u * n_cells_ + c];
      ls.los = pl.los;
      ls.pathloss_db = pl.pathloss_db + penetration;
      ls.shadowing_db =
          shadowing_sigma_db(model, pl.los) * (a * z_common + b * site_z[cell.site_id]);
      ls.bs_gain_dbi = bs_antenna_gain_dbi(cell, img, ue.position, profile.bs_antenna_gain_dbi);
      ls.ue_gain_dbi = profile.ue_antenna_gain_dbi;
      ls.coupling_gain_db = -ls.pathloss_db - ls.shadowing_db + ls.bs_gain_dbi + ls.ue_gain_dbi;
    }
  }
}

void ChannelMap::adjust_coupling(std::size_t cell, std::size_t ue, double delta_db) {
  links_[ue * n_cells_ + cell].coupling_gain_db += delta_db;
}

double rsrp_dbm(double bs_tx_power_dbm, int n_prb, double coupling_gain_db) {
  return bs_tx_power_dbm - 10.0 * std::log10(static_cast<double>(n_prb) * 12.0) + coupling_gain_db;
}

std::vector<double> rsrp_vector(const ChannelMap& ch, std::size_t ue, const FrProfile& profile) {
  std::vector<double> out(ch.n_cells());
  for (std::size_t c = 0; c < ch.n_cells(); ++c)
    out[c] = rsrp_dbm(profile.bs_tx_power_dbm, profile.n_prb, ch.coupling_db(c, ue));
  return out;
}

double noise_dbm(double bandwidth_hz, double noise_figure_db) {
  return kThermalNoiseDbmHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

SinrSample sinr(double signal_mw, std::span<const double> interferers_mw, double noise_mw,
                Direction direction, std::int64_t slot) {
  double denom = noise_mw;
  for (double i : interferers_mw) denom += i;
  return {linear_to_db(signal_mw / denom), direction, slot};
}

double spectral_efficiency(double sinr_db, double eta, double se_max) {
  if (!(sinr_db > -300.0)) return 0.0;
  const double se = eta * std::log2(1.0 + db_to_linear(sinr_db));
  return std::min(se, se_max);
}

int data_symbols(SlotKind kind, const RadioParams& params) {
  if (kind != SlotKind::S) return params.data_symbols;
  const double dl = 14.0 * params.s_slot_dl_fraction - params.control_symbols;
  return std::max(0, static_cast<int>(std::lround(dl)));
}

std::int64_t transport_block_bits(double se, int n_prb_alloc, const FrProfile& profile,
                                  SlotKind kind, const RadioParams& params) {
  if (n_prb_alloc > profile.n_prb)
    throw InvariantViolation("allocation exceeds carrier PRBs");
  if (n_prb_alloc <= 0 || se <= 0.0) return 0;
  const double bits = se * n_prb_alloc * 12.0 * data_symbols(kind, params);
  return static_cast<std::int64_t>(std::floor(bits + 1e-9));
}

bool first_tx_outcome(RngStream& rng, double bler_first) { return !rng.bernoulli(bler_first); }

bool tx_outcome(RngStream& rng, int attempt, const RadioParams& params) {
  return !rng.bernoulli(attempt == 0 ? params.bler_first : params.bler_retx);
}

}  // namespace xrsim
