// Command-line front end: run, capacity, power-study, validate-traffic,
// dump-layout. Exit codes: 0 ok, 2 configuration error, 3 run failure.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "xrsim/config.hpp"
#include "xrsim/engine.hpp"
#include "xrsim/errors.hpp"
#include "xrsim/output.hpp"

using namespace xrsim;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRun = 3;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("-c,--config", o.config_path, "INI config file");
  cmd->add_option("--set", o.overrides, "Override, section.key=value (repeatable)");
  cmd->add_option("-o,--out", o.out_dir, "Output directory (overrides output.dir)");
}

SimConfig load(const CommonOpts& o) {
  SimConfig cfg = o.config_path.empty() ? SimConfig{} : load_config_file(o.config_path);
  for (const auto& s : o.overrides) apply_override(cfg, s);
  if (!o.out_dir.empty()) cfg.output.dir = o.out_dir;
  cfg.validate();
  return cfg;
}

void print_paths(const std::vector<std::string>& paths) {
  for (const auto& p : paths) std::cout << "wrote " << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slot-level XR-over-NR system simulator"};
  app.require_subcommand(1);

  CommonOpts run_o, cap_o, pow_o, lay_o;
  long long run_seed = -1;
  auto* run = app.add_subcommand("run", "Single drop for one seed");
  add_common(run, run_o);
  run->add_option("--seed", run_seed, "Seed (default: first of sim.seeds)");

  auto* cap = app.add_subcommand("capacity", "Satisfaction curve and XR capacity over sim.n_list");

  add_common(cap, cap_o);

  std::vector<std::string> drx_specs;
  bool pow_capacity = false;
  auto* pow = app.add_subcommand("power-study", "CDRX power-saving gain against Always-ON");
  add_common(pow, pow_o);
  pow->add_option("--drx", drx_specs, "DRX 'cycle,on,inactivity' in ms (repeatable; default CDRX1..4)");
  pow->add_flag("--capacity", pow_capacity, "Also sweep capacity per scheme over sim.n_list");

  std::size_t vt_packets = 100000;
  std::uint64_t vt_seed = 1;
  std::string vt_out;
  auto* vt = app.add_subcommand("validate-traffic", "Packet statistics of every traffic stream");
  vt->add_option("-n,--packets", vt_packets, "Packets per stream");
  vt->add_option("--seed", vt_seed, "Seed");
  vt->add_option("-o,--out", vt_out, "CSV path (default stdout)");

  long long lay_seed = -1;
  bool lay_links = false;
  auto* lay = app.add_subcommand("dump-layout", "Cell and UE positions as CSV");
  add_common(lay, lay_o);
  lay->add_option("--seed", lay_seed, "Seed (default: first of sim.seeds)");
  lay->add_flag("--links", lay_links, "Dump per-link pathloss/shadowing/RSRP instead");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const SimConfig cfg = load(run_o);
      const auto seed = run_seed >= 0 ? static_cast<std::uint64_t>(run_seed) : cfg.sim.seeds.front();
      const RunResult r = run_simulation(cfg, seed);
      const auto s = summarize(r);
      std::printf("seed %llu: %zu UEs, satisfied all %zu/%zu  DL %zu/%zu  UL %zu/%zu  (%.1f s)\n",
                  static_cast<unsigned long long>(seed), r.ues.size(), s.all.satisfied, s.all.total,
                  s.dl.satisfied, s.dl.total, s.ul.satisfied, s.ul.total, r.wall_clock_s);
      auto paths = write_run_outputs(r, cfg.output.dir);
      if (cfg.output.link_dump) {
        const std::string path =
            cfg.output.dir + "/" + result_stem(cfg, cfg.scenario.n_ue_per_cell, static_cast<long long>(seed)) +
            "_links.csv";
        std::ofstream os(path);
        write_links_csv(build_scenario(cfg, seed), os);
        paths.push_back(path);
      }
      print_paths(paths);
    } else if (*cap) {
      const SimConfig cfg = load(cap_o);
      const SweepResult sw = run_sweep(cfg, cfg.sim.n_list, cfg.sim.seeds, cfg.sim.threads);
      for (const auto& p : sw.capacity.curve)
        std::printf("n=%-3d %-3s %.3f (%zu/%zu)\n", p.n_per_cell, to_string(p.scope).c_str(), p.count.fraction(),
                    p.count.satisfied, p.count.total);
      std::printf("capacity DL %d  UL %d  combined %d\n", sw.capacity.capacity_dl, sw.capacity.capacity_ul,
                  sw.capacity.combined);
      print_paths(write_capacity_outputs(cfg, sw, cfg.sim.seeds, cfg.output.dir));
    } else if (*pow) {
      const SimConfig cfg = load(pow_o);
      std::vector<DrxConfig> drx;
      if (drx_specs.empty()) {
        for (const auto& [name, d] : named_drx_schemes()) drx.push_back(d);
      } else {
        for (const auto& s : drx_specs) drx.push_back(parse_drx(s));
      }
      std::optional<std::vector<int>> n_list;
      if (pow_capacity) n_list = cfg.sim.n_list;
      const auto rows =
          run_power_study(cfg, drx, cfg.sim.seeds, cfg.scenario.n_ue_per_cell, n_list, cfg.sim.threads);
      for (const auto& r : rows)
        std::printf("%-18s power %.2f  gain %6.2f %%  satisfied %.3f (%+.3f)  DL %.3f (%+.3f)\n", r.label.c_str(),
                    r.avg_power, r.gain.gain_pct, r.all.fraction(), r.satisfaction_delta, r.dl.fraction(),
                    r.dl_satisfaction_delta);
      print_paths(write_power_outputs(cfg, rows, cfg.sim.seeds, cfg.scenario.n_ue_per_cell, cfg.output.dir));
    } else if (*vt) {
      const auto rows = validate_traffic(vt_packets, vt_seed);
      if (vt_out.empty()) {
        write_traffic_csv(rows, std::cout);
      } else {
        std::ofstream os(vt_out);
        write_traffic_csv(rows, os);
      }
      for (const auto& r : rows)
        if (!r.pass) return kExitRun;
    } else if (*lay) {
      const SimConfig cfg = load(lay_o);
      const auto seed = lay_seed >= 0 ? static_cast<std::uint64_t>(lay_seed) : cfg.sim.seeds.front();
      const Scenario sc = build_scenario(cfg, seed);
      if (lay_links)
        write_links_csv(sc, std::cout);
      else
        write_layout_csv(sc, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return kExitRun;
  }
  return 0;
}
