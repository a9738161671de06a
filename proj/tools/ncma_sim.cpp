// Command line front end: single runs from a config file, canned sweeps,
// and the self-check suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncma/oracle.hpp"
#include "ncma/sim.hpp"

namespace {

std::vector<double> default_sweep() {
  std::vector<double> v;
  for (double s = 7.5; s < 14.6; s += 1.0) v.push_back(s);
  v.push_back(15.0);
  return v;
}

ncma::sim::ScenarioConfig preset_config(ncma::phy::DecoderMode mode) {
  ncma::sim::ScenarioConfig cfg;
  cfg.mode = mode;
  cfg.snr_a_db = 7.0;
  cfg.snr_b_db = 7.0;
  cfg.snr_c_db = default_sweep();
  cfg.n_beacons = 1000;
  return cfg;
}

int run_one(const std::string& config_path, const std::string& out_path,
            const std::string& trace_path, int jobs, long long seed_override) {
  auto cfg = ncma::sim::load_config(config_path);
  if (seed_override >= 0) cfg.seed = static_cast<uint64_t>(seed_override);

  std::vector<ncma::sim::TraceRow>* trace_ptr = nullptr;
  std::vector<ncma::sim::TraceRow> trace;
  if (!trace_path.empty()) trace_ptr = &trace;

  const auto records = ncma::sim::run_scenario(cfg, jobs, trace_ptr);
  ncma::sim::emit_results(records, out_path);
  std::cout << "wrote " << records.size() << " rows to " << out_path << "\n";

  if (trace_ptr) {
    std::ofstream tf(trace_path, std::ios::binary);
    tf << ncma::sim::trace_csv(trace);
    std::cout << "wrote " << trace.size() << " trace rows to " << trace_path << "\n";
  }
  return 0;
}

int run_sweep(const std::string& preset, const std::string& out_path, int jobs,
              long long seed_override) {
  using ncma::phy::DecoderMode;
  std::vector<DecoderMode> modes;
  std::vector<ncma::sim::ScenarioConfig> cfgs;
  if (preset == "identical") {
    modes = {DecoderMode::RateIdenticalQpsk, DecoderMode::RateIdenticalBpsk};
  } else if (preset == "diverse") {
    modes = {DecoderMode::DrNcma, DecoderMode::SrNcma};
  } else if (preset == "all") {
    modes = {DecoderMode::RateIdenticalBpsk, DecoderMode::RateIdenticalQpsk,
             DecoderMode::DrNcma, DecoderMode::SrNcma};
  } else {
    std::cerr << "unknown preset: " << preset << "\n";
    return 2;
  }
  for (auto m : modes) {
    auto cfg = preset_config(m);
    if (preset == "all") {
      cfg.snr_a_db = cfg.snr_b_db = 8.0;
      cfg.snr_c_db.clear();
      for (double s = 8.0; s < 14.5; s += 1.0) cfg.snr_c_db.push_back(s);
    }
    if (seed_override >= 0) cfg.seed = static_cast<uint64_t>(seed_override);
    cfgs.push_back(cfg);
  }

  std::vector<ncma::sim::ThroughputRecord> all;
  for (const auto& cfg : cfgs) {
    auto recs = ncma::sim::run_scenario(cfg, jobs);
    all.insert(all.end(), recs.begin(), recs.end());
    std::cout << ncma::phy::mode_name(cfg.mode) << ": " << recs.size() << " rows\n";
  }
  ncma::sim::emit_results(all, out_path);
  std::cout << "wrote " << all.size() << " rows to " << out_path << "\n";
  return 0;
}

int run_oracle(uint64_t seed) {
  const auto results = ncma::oracle::oracle_suite(seed);
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name;
    if (!r.passed) std::cout << "  (" << r.detail << ")";
    std::cout << "\n";
  }
  return ncma::oracle::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-user network-coded multiple access link simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path = "results.csv", trace_path, preset;
  int jobs = 0;
  long long seed = -1;
  uint64_t oracle_seed = 1;

  auto* run = app.add_subcommand("run", "simulate one scenario from a config file");
  run->add_option("--config", config_path, "scenario config (json)")->required();
  run->add_option("--out", out_path, "output csv path");
  run->add_option("--trace", trace_path, "per-slot decoder trace csv");
  run->add_option("--jobs", jobs, "worker threads (0 = hardware)");
  run->add_option("--seed", seed, "override config seed");

  auto* sweep = app.add_subcommand("sweep", "run a canned multi-mode sweep");
  sweep->add_option("--preset", preset, "identical | diverse | all")->required();
  sweep->add_option("--out", out_path, "output csv path");
  sweep->add_option("--jobs", jobs, "worker threads (0 = hardware)");
  sweep->add_option("--seed", seed, "override default seed");

  auto* oracle = app.add_subcommand("oracle", "run the independent self-check suite");
  oracle->add_option("--seed", oracle_seed, "suite seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_one(config_path, out_path, trace_path, jobs, seed);
    if (sweep->parsed()) return run_sweep(preset, out_path, jobs, seed);
    if (oracle->parsed()) return run_oracle(oracle_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
