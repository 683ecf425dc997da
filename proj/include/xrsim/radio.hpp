#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xrsim/deployment.hpp"
#include "xrsim/stochastics.hpp"
#include "xrsim/traffic.hpp"

namespace xrsim {

enum class FrequencyRange { FR1, FR2 };

std::string to_string(FrequencyRange fr);
FrequencyRange parse_fr(const std::string& text);

struct FrProfile {
  FrequencyRange fr = FrequencyRange::FR1;
  double carrier_ghz = 4.0;
  double scs_khz = 30.0;
  double bandwidth_mhz = 100.0;
  int n_prb = 273;
  double slot_ms = 0.5;
  double bs_noise_figure_db = 5.0;
  double ue_noise_figure_db = 9.0;
  double bs_tx_power_dbm = 51.0;
  double ue_tx_power_dbm = 23.0;
  double bs_antenna_gain_dbi = 5.0;
  double ue_antenna_gain_dbi = 0.0;

  double prb_bandwidth_hz() const { return 12.0 * scs_khz * 1e3; }
};

/// Carrier, numerology and power settings for a frequency range; BS power
/// depends on the deployment.
FrProfile make_fr_profile(FrequencyRange fr, DeploymentKind deployment);

enum class SlotKind { D, S, U };

char to_char(SlotKind k);

struct RadioParams {
  double eta = 0.75;
  double se_max = 7.4063;
  double bler_first = 0.10;
  double bler_retx = 0.01;
  double csi_period_ms = 2.0;
  /// DL share of the special slot's 14 symbols (control overhead is taken
  /// out of that share).
  double s_slot_dl_fraction = 10.0 / 14.0;
  int data_symbols = 12;
  int control_symbols = 2;
  double shadowing_site_correlation = 0.5;
  bool o2i_penetration = true;
  /// Serving-link beamforming gain and the linear factor applied to
  /// non-serving links (MIMO / grid-of-beams surrogate), per FR. FR1: 32-port
  /// array gain (15 dB) plus 4-branch UE receive combining (6 dB).
  double fr1_beam_gain_db = 21.0;
  double fr1_interference_factor = 1.0;
  double fr2_beam_gain_db = 14.0;
  double fr2_interference_factor = 0.2;
  double ul_p0_dbm_per_prb = -95.0;
  double ul_alpha = 1.0;
  double min_distance_du_m = 10.0;

  double beam_gain_db(FrequencyRange fr) const {
    return fr == FrequencyRange::FR1 ? fr1_beam_gain_db : fr2_beam_gain_db;
  }
  double interference_factor(FrequencyRange fr) const {
    return fr == FrequencyRange::FR1 ? fr1_interference_factor : fr2_interference_factor;
  }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// --- Large-scale propagation -------------------------------------------------

enum class PathlossModel { UMa, InH };

PathlossModel pathloss_model_for(DeploymentKind kind);

/// LOS probability as a function of 2D distance (UMa also depends on UE height).
double uma_los_probability(double d2d_m, double h_ut_m);
double inh_los_probability(double d2d_m);

/// Basic pathloss without shadowing or penetration loss, dB.
double uma_pathloss_db(double d2d_m, double h_bs_m, double h_ut_m, double fc_ghz, bool los);
double inh_pathloss_db(double d3d_m, double fc_ghz, bool los);

double shadowing_sigma_db(PathlossModel model, bool los);

/// Deterministic part of the low-loss outdoor-to-indoor building penetration.
double o2i_wall_loss_db(double fc_ghz);

/// 3-sector element pattern with electrical downtilt, dBi. Ceiling cells
/// (downtilt 90) have no azimuth dependence.
double bs_antenna_gain_dbi(const Cell& cell, Vec2 site_image, Vec3 ue, double max_gain_dbi);

struct PathlossResult {
  double pathloss_db = 0.0;
  bool los = false;
};

/// Pathloss for one link given the 2D/3D geometry and a uniform draw for the
/// LOS decision. Distances below the model minimum are clamped.
PathlossResult pathloss(PathlossModel model, double d2d_m, double h_bs_m, double h_ut_m,
                        double fc_ghz, double los_uniform, double min_d2d_m = 10.0);

struct LinkState {
  double pathloss_db = 0.0;
  double shadowing_db = 0.0;
  bool los = false;
  double bs_gain_dbi = 0.0;
  double ue_gain_dbi = 0.0;
  double coupling_gain_db = 0.0;
};

/// Large-scale state for every (cell, UE) pair, shared by DL and UL.
class ChannelMap {
public:
  ChannelMap() = default;
  ChannelMap(const Layout& layout, std::span<const UserTerminal> ues, const FrProfile& profile,
             const RadioParams& params, const RngStream& rng);

  std::size_t n_cells() const { return n_cells_; }
  std::size_t n_ues() const { return n_ues_; }
  const LinkState& link(std::size_t cell, std::size_t ue) const { return links_[ue * n_cells_ + cell]; }
  double coupling_db(std::size_t cell, std::size_t ue) const { return link(cell, ue).coupling_gain_db; }
  /// Adds `delta_db` to one link's coupling gain (calibration / tests).
  void adjust_coupling(std::size_t cell, std::size_t ue, double delta_db);

private:
  std::size_t n_cells_ = 0;
  std::size_t n_ues_ = 0;
  std::vector<LinkState> links_;
};

double rsrp_dbm(double bs_tx_power_dbm, int n_prb, double coupling_gain_db);

/// RSRP of every cell seen by `ue`.
std::vector<double> rsrp_vector(const ChannelMap& ch, std::size_t ue, const FrProfile& profile);

/// Thermal noise over `bandwidth_hz`, dBm.
double noise_dbm(double bandwidth_hz, double noise_figure_db);

struct SinrSample {
  double sinr_db = 0.0;
  Direction direction = Direction::DL;
  std::int64_t slot = 0;
};

/// S / (sum(I) + N), all in linear mW over the same bandwidth.
SinrSample sinr(double signal_mw, std::span<const double> interferers_mw, double noise_mw,
                Direction direction, std::int64_t slot = 0);

double spectral_efficiency(double sinr_db, double eta = 0.75, double se_max = 7.4063);

int data_symbols(SlotKind kind, const RadioParams& params);

std::int64_t transport_block_bits(double se, int n_prb_alloc, const FrProfile& profile,
                                  SlotKind kind, const RadioParams& params);

/// First transmissions fail with `bler_first`; retransmissions with `bler_retx`.
bool first_tx_outcome(RngStream& rng, double bler_first);
bool tx_outcome(RngStream& rng, int attempt, const RadioParams& params);

}  // namespace xrsim
