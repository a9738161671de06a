#pragma once

#include <string>

#include "ncma/mac.hpp"
#include "ncma/phy.hpp"

namespace ncma::sim {

struct ScenarioConfig {
  phy::DecoderMode mode = phy::DecoderMode::SrNcma;
  double snr_a_db = 7.0;
  double snr_b_db = 7.0;
  std::vector<double> snr_c_db{13.0};  // sweep values for user C
  int n_beacons = 1000;
  std::array<int, 3> l_norm{8, 16, 32};  // messages, counted in BPSK-packet units
  int n_max_factor = 4;
  int k_info = 64;  // payload bits of a BPSK packet / QPSK half-packet
  uint64_t seed = 1;
  double llr_clip = 50.0;
  bool exact_llr = false;
  double noise_var_ratio = 1.0;

  void validate() const;  // throws on inconsistent settings
};

// Structured key/value file, nested sections, unknown keys rejected.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text);

enum class Tier { Mud = 0, Phy = 1, Mac = 2 };
const char* tier_name(Tier t);

struct TierResult {
  // Series order: A, B, C, sys.
  std::array<double, 4> th{};
  std::array<double, 4> ci_lo{};
  std::array<double, 4> ci_hi{};
  std::array<int64_t, 3> n_msgs{};
  std::array<int64_t, 3> losses{};
  // Messages the receiver believed decoded but that differ from the sent
  // data (possible under near-degenerate channel draws; all CRCs pass).
  // Such messages earn no throughput.
  std::array<int64_t, 3> undetected{};
  int anomalies = 0;
};

struct ThroughputRecord {
  phy::DecoderMode mode{};
  double snr_a = 0, snr_b = 0, snr_c = 0;
  int n_beacons = 0;
  uint64_t seed = 0;
  std::array<TierResult, 3> tiers;  // mud, phy, mac
};

struct TraceRow {
  int slot;
  std::string decoder;
  bool passed;
};
using TraceLog = std::vector<TraceRow>;

// One pipeline variant over the seeded slot stream. The channel and noise
// draws depend only on (seed, snr_c, slot), so all tiers see the same air.
TierResult run_tier(const ScenarioConfig& cfg, double snr_c, Tier tier, TraceLog* trace = nullptr);

// When trace is non-null it receives the per-slot decoder outcomes of the
// first sweep point's full-bank tier.
std::vector<ThroughputRecord> run_scenario(const ScenarioConfig& cfg, int jobs = 1,
                                           TraceLog* trace = nullptr);

std::string results_csv(const std::vector<ThroughputRecord>& records);
void emit_results(const std::vector<ThroughputRecord>& records, const std::string& path);
std::string trace_csv(const TraceLog& log);

}  // namespace ncma::sim
