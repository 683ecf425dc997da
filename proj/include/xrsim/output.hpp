#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "xrsim/config.hpp"
#include "xrsim/engine.hpp"

namespace xrsim {

/// "<deployment>_<fr>_<service>_<rate>M_n<n>_s<seed>", the common prefix of
/// every file a run writes. Pass seed < 0 for multi-seed aggregates.
std::string result_stem(const SimConfig& cfg, int n_per_cell, long long seed);

/// Writes <stem>_ues.csv, <stem>_power.csv, <stem>_summary.json,
/// <stem>_config.ini and, when enabled, <stem>_packets.csv. Returns the paths.
std::vector<std::string> write_run_outputs(const RunResult& r, const std::string& dir);

std::vector<std::string> write_capacity_outputs(const SimConfig& cfg, const SweepResult& sweep,
                                                const std::vector<std::uint64_t>& seeds,
                                                const std::string& dir);

std::vector<std::string> write_power_outputs(const SimConfig& cfg, const std::vector<PowerStudyRow>& rows,
                                             const std::vector<std::uint64_t>& seeds, int n_per_cell,
                                             const std::string& dir);

void write_layout_csv(const Scenario& sc, std::ostream& os);
void write_links_csv(const Scenario& sc, std::ostream& os);

/// Empirical packet statistics of one stream against its analytical values.
struct TrafficCheck {
  std::string stream;
  std::size_t n = 0;
  double mean_bytes = 0.0;
  double std_bytes = 0.0;
  double rate_bps = 0.0;
  double min_bytes = 0.0;
  double max_bytes = 0.0;
  double expected_mean = 0.0;
  double expected_std = 0.0;
  double expected_rate = 0.0;
  bool pass = false;
};

/// Standard deviation of Gaussian(mean, std) truncated to [min, max].
double truncated_gaussian_std(const TruncGaussSpec& spec);

/// Every stream type of the traffic tables (video at each listed rate,
/// motion, audio), `n_packets` each. Pass means mean within 1 %, std within
/// 5 %, sizes inside the bounds.
std::vector<TrafficCheck> validate_traffic(std::size_t n_packets, std::uint64_t seed);

void write_traffic_csv(const std::vector<TrafficCheck>& rows, std::ostream& os);

}  // namespace xrsim
