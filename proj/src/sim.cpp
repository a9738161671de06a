#include "ncma/sim.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <stdexcept>

#include "ncma/fec.hpp"

namespace ncma::sim {

namespace {

// Two-sided 95% Student-t critical values, dof 1..9 (>=10 batches never occurs).
constexpr double kT95[10] = {0,     12.706, 4.303, 3.182, 2.776,
                             2.571, 2.447,  2.365, 2.306, 2.262};

struct UserPlan {
  modem::Scheme scheme;
  int l_pkts;       // packets per message in this mode
  int n_max;        // abandonment cap, in packets
  int k_bits;       // erasure-coded payload bits per packet
  int pad_bits;     // zero filler up to the airtime budget, inside the CRC
  int pkts_per_slot;
  int l_norm;       // BPSK-packet units credited per decoded message
};

UserPlan make_plan(const ScenarioConfig& cfg, int user) {
  const auto schemes = phy::mode_schemes(cfg.mode);
  UserPlan p;
  p.scheme = schemes[static_cast<std::size_t>(user)];
  p.l_norm = cfg.l_norm[static_cast<std::size_t>(user)];
  p.pad_bits = 0;
  switch (p.scheme) {
    case modem::Scheme::Bpsk:
      p.l_pkts = p.l_norm;
      p.k_bits = cfg.k_info;
      p.pkts_per_slot = 1;
      break;
    case modem::Scheme::QpskSplit:
      p.l_pkts = p.l_norm;  // half-packets
      p.k_bits = cfg.k_info;
      p.pkts_per_slot = 2;
      break;
    case modem::Scheme::QpskStandard: {
      // A whole-QPSK packet fills the same airtime as two BPSK packets and
      // carries one CRC+tail, hence the extra 38 payload bits. The erasure
      // code works in whole bytes, so any fractional byte of that budget is
      // carried as constant zero padding.
      p.l_pkts = p.l_norm / 2;
      const int budget = 2 * cfg.k_info + 38;
      p.k_bits = 8 * (budget / 8);
      p.pad_bits = budget - p.k_bits;
      p.pkts_per_slot = 1;
      break;
    }
  }
  p.n_max = cfg.n_max_factor * p.l_pkts;
  return p;
}

struct UserTx {
  UserPlan plan;
  int64_t msg_id = 0;
  Bits msg_data;
  std::optional<mac::RsEncoder> enc;
  int next_index = 1;
  int sent = 0;
};

// Coded packet bits plus the zero filler, ready for crc_attach.
Bits frame_payload(const UserTx& tx, int index) {
  Bits p = unpack_bits(tx.enc->packet(index), static_cast<std::size_t>(tx.plan.k_bits));
  p.insert(p.end(), static_cast<std::size_t>(tx.plan.pad_bits), 0);
  return p;
}

uint64_t snr_key(double snr_c) { return std::bit_cast<uint64_t>(snr_c); }

void new_message(UserTx& tx, const ScenarioConfig& cfg, double snr_c, int user,
                 const mac::RsCode& code, mac::MacState& st) {
  ++tx.msg_id;
  auto rng = make_rng({cfg.seed, snr_key(snr_c), 0xDA7Aull, static_cast<uint64_t>(user),
                       static_cast<uint64_t>(tx.msg_id)});
  tx.msg_data = random_bits(rng, static_cast<std::size_t>(tx.plan.l_pkts) *
                                     static_cast<std::size_t>(tx.plan.k_bits));
  std::vector<Bytes> chunks(static_cast<std::size_t>(tx.plan.l_pkts));
  for (int i = 0; i < tx.plan.l_pkts; ++i) {
    Bits chunk(tx.msg_data.begin() + static_cast<std::ptrdiff_t>(i) * tx.plan.k_bits,
               tx.msg_data.begin() + static_cast<std::ptrdiff_t>(i + 1) * tx.plan.k_bits);
    chunks[static_cast<std::size_t>(i)] = pack_bits(chunk);
  }
  tx.enc.emplace(code, std::move(chunks));
  tx.next_index = 1;
  tx.sent = 0;
  st.start_message(user, tx.msg_id);
}

}  // namespace

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::Mud: return "mud";
    case Tier::Phy: return "phy";
    case Tier::Mac: return "mac";
  }
  return "?";
}

void ScenarioConfig::validate() const {
  if (snr_c_db.empty()) throw std::invalid_argument("config: snr_c_db sweep is empty");
  for (double v : snr_c_db)
    if (!std::isfinite(v)) throw std::invalid_argument("config: snr_c_db must be finite");
  if (!std::isfinite(snr_a_db) || !std::isfinite(snr_b_db))
    throw std::invalid_argument("config: SNR values must be finite");
  if (n_beacons < 1) throw std::invalid_argument("config: n_beacons must be >= 1");
  if (k_info < 8 || k_info % 8 != 0)
    throw std::invalid_argument("config: k_info must be a positive multiple of 8");
  if (n_max_factor < 1) throw std::invalid_argument("config: n_max_factor must be >= 1");
  if (llr_clip <= 0) throw std::invalid_argument("config: llr_clip must be positive");
  if (noise_var_ratio <= 0) throw std::invalid_argument("config: noise_var_ratio must be positive");
  const auto schemes = phy::mode_schemes(mode);
  for (int u = 0; u < 3; ++u) {
    const int l = l_norm[static_cast<std::size_t>(u)];
    if (l < 1) throw std::invalid_argument("config: message sizes must be >= 1");
    if (schemes[static_cast<std::size_t>(u)] == modem::Scheme::QpskStandard && l % 2 != 0)
      throw std::invalid_argument("config: whole-QPSK users need an even packet count");
    const UserPlan p = make_plan(*this, u);
    if (p.n_max > 256)
      throw std::invalid_argument("config: n_max_factor * packets exceeds the erasure-code field");
  }
}

TierResult run_tier(const ScenarioConfig& cfg, double snr_c, Tier tier, TraceLog* trace) {
  cfg.validate();
  const phy::DecoderMode mode = cfg.mode;
  const auto schemes = phy::mode_schemes(mode);
  const std::array<bool, 3> qpsk{schemes[0] != modem::Scheme::Bpsk,
                                 schemes[1] != modem::Scheme::Bpsk,
                                 schemes[2] != modem::Scheme::Bpsk};
  const std::array<double, 3> snr{cfg.snr_a_db, cfg.snr_b_db, snr_c};
  const int dim = phy::mode_dim(mode);

  std::array<UserTx, 3> tx;
  std::vector<mac::RsCode> codes;
  mac::MacConfig mc;
  for (int u = 0; u < 3; ++u) {
    tx[static_cast<std::size_t>(u)].plan = make_plan(cfg, u);
    const UserPlan& p = tx[static_cast<std::size_t>(u)].plan;
    mc.l_pkts[static_cast<std::size_t>(u)] = p.l_pkts;
    mc.n_max[static_cast<std::size_t>(u)] = p.n_max;
    mc.k_bits[static_cast<std::size_t>(u)] = p.k_bits;
    mc.pad_bits[static_cast<std::size_t>(u)] = p.pad_bits;
    codes.emplace_back(p.l_pkts, p.n_max);
  }
  mac::MacState st(mc);
  for (int u = 0; u < 3; ++u)
    new_message(tx[static_cast<std::size_t>(u)], cfg, snr_c, u, codes[static_cast<std::size_t>(u)], st);

  const int n_batches = std::min(10, cfg.n_beacons);
  std::vector<std::array<int64_t, 3>> batch_counts(static_cast<std::size_t>(n_batches), {0, 0, 0});
  std::array<int64_t, 3> n_msgs{0, 0, 0};
  std::array<int64_t, 3> losses{0, 0, 0};
  std::array<int64_t, 3> undetected{0, 0, 0};
  int phy_anomalies = 0;

  phy::BankOptions bopt;
  bopt.llr_clip = cfg.llr_clip;
  bopt.exact = cfg.exact_llr;
  bopt.mud_only = tier == Tier::Mud;
  const bool bridging = tier == Tier::Mac;

  for (int slot = 0; slot < cfg.n_beacons; ++slot) {
    // Air draws shared by every tier: same sub-seed, same draw order.
    auto rng_air = make_rng({cfg.seed, snr_key(snr_c), 0xA12ull, static_cast<uint64_t>(slot)});
    const auto cr = chan::draw_realization(snr, qpsk, rng_air, cfg.noise_var_ratio);

    // Build this slot's packets and the coordinate of each unknown.
    std::vector<mac::PacketCoord> coord_of(static_cast<std::size_t>(dim));
    std::array<modem::SymbolStream, 3> streams;
    for (int u = 0; u < 3; ++u) {
      UserTx& t = tx[static_cast<std::size_t>(u)];
      if (t.plan.scheme == modem::Scheme::QpskSplit) {
        const int ii = t.next_index, iq = t.next_index + 1;
        const Bits pi = frame_payload(t, ii), pq = frame_payload(t, iq);
        streams[static_cast<std::size_t>(u)] = modem::qpsk_modulate_split(
            fec::conv_encode(fec::crc_attach(pi).bits()), fec::conv_encode(fec::crc_attach(pq).bits()));
        coord_of[2] = {u, t.msg_id, ii};
        coord_of[3] = {u, t.msg_id, iq};
      } else {
        const Bits p = frame_payload(t, t.next_index);
        const Bits cw = fec::conv_encode(fec::crc_attach(p).bits());
        streams[static_cast<std::size_t>(u)] = t.plan.scheme == modem::Scheme::Bpsk
                                                   ? modem::bpsk_modulate(cw)
                                                   : modem::qpsk_modulate_standard(cw);
        coord_of[static_cast<std::size_t>(u)] = {u, t.msg_id, t.next_index};
      }
    }

    chan::RxSlot rx = chan::transmit(streams[0], streams[1], streams[2], cr, rng_air);
    rx.slot = slot;

    std::vector<phy::TraceRow> bank_trace;
    auto eqs = phy::run_decoder_bank(rx, mode, bopt, trace ? &bank_trace : nullptr);
    if (trace)
      for (auto& [label, ok] : bank_trace) trace->push_back({slot, label, ok});

    phy::SlotOutcome outcome = phy::phy_bridge(eqs);
    phy_anomalies += outcome.anomalies;

    std::vector<std::pair<mac::PacketCoord, Bits>> natives;
    natives.reserve(outcome.natives.size());
    for (auto& [idx, payload] : outcome.natives)
      natives.emplace_back(coord_of[static_cast<std::size_t>(idx)], std::move(payload));
    std::vector<mac::StoredEquation> leftovers;
    if (bridging) {
      for (auto& eq : outcome.unresolved) {
        mac::StoredEquation se;
        se.slot = slot;
        se.payload = std::move(eq.payload);
        for (int u = 0; u < dim; ++u)
          if ((eq.coeffs >> u) & 1u) se.coords.push_back(coord_of[static_cast<std::size_t>(u)]);
        leftovers.push_back(std::move(se));
      }
    }

    const std::vector<int> decoded = st.add_slot(slot, natives, leftovers, bridging);
    const int batch = static_cast<int>((static_cast<int64_t>(slot) * n_batches) / cfg.n_beacons);
    for (int u : decoded) {
      // With fully correlated antennas, a near phase collision between two
      // comparable-power users can leave a slot's decoder outputs mutually
      // consistent under a relabeling of the users, so a wrong packet set
      // can pass every CRC. No receiver could tell the difference, but the
      // simulator can: throughput is credited only for messages that match
      // the transmitted data. The believed decode still drives the
      // acknowledgement and the message advance either way.
      if (st.decoded_data(u) != tx[static_cast<std::size_t>(u)].msg_data) {
        ++undetected[static_cast<std::size_t>(u)];
        continue;
      }
      ++n_msgs[static_cast<std::size_t>(u)];
      ++batch_counts[static_cast<std::size_t>(batch)][static_cast<std::size_t>(u)];
    }

    // Feedback at slot end: advance on decode, abandon on cap.
    for (int u = 0; u < 3; ++u) {
      UserTx& t = tx[static_cast<std::size_t>(u)];
      if (st.message_decoded(u)) {
        new_message(t, cfg, snr_c, u, codes[static_cast<std::size_t>(u)], st);
      } else {
        t.sent += t.plan.pkts_per_slot;
        t.next_index += t.plan.pkts_per_slot;
        if (t.sent >= t.plan.n_max) {
          st.abandon_message(u);
          ++losses[static_cast<std::size_t>(u)];
          new_message(t, cfg, snr_c, u, codes[static_cast<std::size_t>(u)], st);
        }
      }
    }
  }

  TierResult res;
  res.n_msgs = n_msgs;
  res.losses = losses;
  res.undetected = undetected;
  res.anomalies = phy_anomalies + st.anomalies();
  double sys = 0.0;
  for (int u = 0; u < 3; ++u) {
    res.th[static_cast<std::size_t>(u)] =
        static_cast<double>(tx[static_cast<std::size_t>(u)].plan.l_norm) *
        static_cast<double>(n_msgs[static_cast<std::size_t>(u)]) / cfg.n_beacons;
    sys += res.th[static_cast<std::size_t>(u)];
  }
  res.th[3] = sys;

  // Confidence intervals from batch means.
  std::array<std::vector<double>, 4> series;
  for (int b = 0; b < n_batches; ++b) {
    const int64_t lo = static_cast<int64_t>(b) * cfg.n_beacons / n_batches;
    const int64_t hi = static_cast<int64_t>(b + 1) * cfg.n_beacons / n_batches;
    const double len = static_cast<double>(hi - lo);
    double bsys = 0.0;
    for (int u = 0; u < 3; ++u) {
      const double v = static_cast<double>(tx[static_cast<std::size_t>(u)].plan.l_norm) *
                       static_cast<double>(batch_counts[static_cast<std::size_t>(b)][static_cast<std::size_t>(u)]) / len;
      series[static_cast<std::size_t>(u)].push_back(v);
      bsys += v;
    }
    series[3].push_back(bsys);
  }
  for (int s = 0; s < 4; ++s) {
    const auto& v = series[static_cast<std::size_t>(s)];
    const int nb = static_cast<int>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= nb;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double half =
        nb > 1 ? kT95[nb - 1] * std::sqrt(var / (nb - 1)) / std::sqrt(static_cast<double>(nb)) : 0.0;
    res.ci_lo[static_cast<std::size_t>(s)] = mean - half;
    res.ci_hi[static_cast<std::size_t>(s)] = mean + half;
  }
  return res;
}

std::vector<ThroughputRecord> run_scenario(const ScenarioConfig& cfg, int jobs, TraceLog* trace) {
  cfg.validate();
  if (jobs < 1) jobs = 1;
  struct Task {
    std::size_t point;
    Tier tier;
  };
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < cfg.snr_c_db.size(); ++p)
    for (int t = 0; t < 3; ++t) tasks.push_back({p, static_cast<Tier>(t)});

  std::vector<ThroughputRecord> records(cfg.snr_c_db.size());
  for (std::size_t p = 0; p < records.size(); ++p) {
    records[p].mode = cfg.mode;
    records[p].snr_a = cfg.snr_a_db;
    records[p].snr_b = cfg.snr_b_db;
    records[p].snr_c = cfg.snr_c_db[p];
    records[p].n_beacons = cfg.n_beacons;
    records[p].seed = cfg.seed;
  }

  std::size_t next = 0;
  while (next < tasks.size()) {
    const std::size_t wave = std::min<std::size_t>(static_cast<std::size_t>(jobs), tasks.size() - next);
    std::vector<std::future<TierResult>> futs;
    for (std::size_t i = 0; i < wave; ++i) {
      const Task t = tasks[next + i];
      TraceLog* log = (trace && t.point == 0 && t.tier == Tier::Mac) ? trace : nullptr;
      futs.push_back(std::async(std::launch::async, [&cfg, t, log] {
        return run_tier(cfg, cfg.snr_c_db[t.point], t.tier, log);
      }));
    }
    for (std::size_t i = 0; i < wave; ++i) {
      const Task t = tasks[next + i];
      records[t.point].tiers[static_cast<std::size_t>(t.tier)] = futs[i].get();
    }
    next += wave;
  }
  return records;
}

std::string results_csv(const std::vector<ThroughputRecord>& records) {
  std::string out = "mode,snr_a_db,snr_b_db,snr_c_db,tier,series,throughput,ci_low,ci_high,n_beacons,seed\n";
  static const char* kSeries[4] = {"A", "B", "C", "sys"};
  char line[256];
  for (const ThroughputRecord& r : records) {
    for (int t = 0; t < 3; ++t) {
      const TierResult& tr = r.tiers[static_cast<std::size_t>(t)];
      for (int s = 0; s < 4; ++s) {
        std::snprintf(line, sizeof line, "%s,%.6f,%.6f,%.6f,%s,%s,%.6f,%.6f,%.6f,%d,%llu\n",
                      phy::mode_name(r.mode), r.snr_a, r.snr_b, r.snr_c,
                      tier_name(static_cast<Tier>(t)), kSeries[s],
                      tr.th[static_cast<std::size_t>(s)], tr.ci_lo[static_cast<std::size_t>(s)],
                      tr.ci_hi[static_cast<std::size_t>(s)], r.n_beacons,
                      static_cast<unsigned long long>(r.seed));
        out += line;
      }
    }
  }
  return out;
}

void emit_results(const std::vector<ThroughputRecord>& records, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_results: cannot open " + path);
  f << results_csv(records);
}

std::string trace_csv(const TraceLog& log) {
  std::string out = "slot,decoder,passed\n";
  char line[128];
  for (const TraceRow& r : log) {
    std::snprintf(line, sizeof line, "%d,%s,%d\n", r.slot, r.decoder.c_str(), r.passed ? 1 : 0);
    out += line;
  }
  return out;
}

}  // namespace ncma::sim
