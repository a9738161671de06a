#include "ncma/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncma/demod.hpp"
#include "ncma/fec.hpp"
#include "ncma/rs.hpp"

namespace ncma::oracle {

Bits shift_register_encode(const Bits& info, unsigned poly_a_octal, unsigned poly_b_octal,
                           int memory) {
  std::vector<uint8_t> delay(static_cast<std::size_t>(memory), 0);
  auto taps = [&](unsigned poly, uint8_t u) {
    // Octal word read MSB-first: coefficient on the input, then on each delay.
    uint8_t acc = 0;
    for (int d = 0; d <= memory; ++d) {
      if ((poly >> (memory - d)) & 1u) acc ^= (d == 0) ? u : delay[static_cast<std::size_t>(d - 1)];
    }
    return acc;
  };
  Bits out;
  Bits padded = info;
  padded.insert(padded.end(), static_cast<std::size_t>(memory), 0);
  for (uint8_t u : padded) {
    out.push_back(taps(poly_a_octal, u));
    out.push_back(taps(poly_b_octal, u));
    for (int d = memory - 1; d > 0; --d) delay[static_cast<std::size_t>(d)] = delay[static_cast<std::size_t>(d - 1)];
    delay[0] = u;
  }
  return out;
}

Bits exhaustive_ml_decode(const SoftBits& llrs, int k, double* gap_out) {
  double best = -1e300, second = -1e300;
  Bits best_msg;
  for (uint32_t m = 0; m < (1u << k); ++m) {
    Bits msg(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) msg[static_cast<std::size_t>(i)] = (m >> i) & 1u;
    const Bits cw = fec::conv_encode(msg);
    double metric = 0.0;
    for (std::size_t i = 0; i < cw.size(); ++i) metric += cw[i] ? -llrs[i] : llrs[i];
    if (metric > best) {
      second = best;
      best = metric;
      best_msg = msg;
    } else if (metric > second) {
      second = metric;
    }
  }
  if (gap_out) *gap_out = best - second;
  return best_msg;
}

uint32_t crc_long_division(const Bits& payload) {
  // Dividend: payload bits followed by 32 zeros; divisor: x^32 + kCrcPoly.
  Bits work = payload;
  work.insert(work.end(), 32, 0);
  for (std::size_t i = 0; i + 32 < work.size() + 1 && i < payload.size(); ++i) {
    if (!work[i]) continue;
    work[i] = 0;
    for (int b = 0; b < 32; ++b) {
      const uint8_t g = (fec::kCrcPoly >> (31 - b)) & 1u;
      work[i + 1 + static_cast<std::size_t>(b)] ^= g;
    }
  }
  uint32_t rem = 0;
  for (std::size_t i = payload.size(); i < work.size(); ++i) rem = (rem << 1) | work[i];
  return rem;
}

std::map<int, Bits> brute_force_recoverable(const std::vector<XorEquation>& eqs, int dim) {
  std::map<int, Bits> out;
  const std::size_t n = eqs.size();
  for (uint32_t sub = 1; sub < (1u << n); ++sub) {
    uint8_t mask = 0;
    Bits payload;
    for (std::size_t i = 0; i < n; ++i) {
      if (!((sub >> i) & 1u)) continue;
      mask ^= eqs[i].coeffs;
      if (payload.empty())
        payload = eqs[i].payload;
      else
        payload = xor_bits(payload, eqs[i].payload);
    }
    if (std::popcount(mask) == 1) {
      const int u = std::countr_zero(mask);
      if (u < dim) out.emplace(u, payload);
    }
  }
  return out;
}

namespace {

// GF(2^8) multiply via shift-and-reduce; no shared tables with the library.
uint8_t peasant_mul(uint8_t a, uint8_t b) {
  uint8_t p = 0;
  for (int i = 0; i < 8; ++i) {
    if (b & 1u) p ^= a;
    const bool hi = a & 0x80u;
    a = static_cast<uint8_t>(a << 1);
    if (hi) a ^= 0x1Du;  // 0x11D without the x^8 term
    b >>= 1;
  }
  return p;
}

uint8_t peasant_pow(uint8_t a, int e) {
  uint8_t r = 1;
  for (int i = 0; i < e; ++i) r = peasant_mul(r, a);
  return r;
}

uint8_t peasant_inv(uint8_t a) { return peasant_pow(a, 254); }

}  // namespace

std::optional<std::vector<Bytes>> gauss_rs_decode(int l,
                                                  const std::vector<std::pair<int, Bytes>>& packets) {
  std::map<int, const Bytes*> distinct;
  for (const auto& [idx, data] : packets) distinct.emplace(idx, &data);
  if (static_cast<int>(distinct.size()) < l) return std::nullopt;

  std::vector<uint8_t> xs;
  std::vector<const Bytes*> ys;
  for (const auto& [idx, data] : distinct) {
    xs.push_back(static_cast<uint8_t>(idx - 1));
    ys.push_back(data);
    if (static_cast<int>(xs.size()) == l) break;
  }
  const std::size_t width = ys.front()->size();

  // Solve V * coeff = y per byte column, V[r][c] = xs[r]^c.
  std::vector<std::vector<uint8_t>> base(static_cast<std::size_t>(l),
                                         std::vector<uint8_t>(static_cast<std::size_t>(l)));
  for (int r = 0; r < l; ++r)
    for (int c = 0; c < l; ++c)
      base[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = peasant_pow(xs[static_cast<std::size_t>(r)], c);

  std::vector<Bytes> chunks(static_cast<std::size_t>(l), Bytes(width, 0));
  for (std::size_t col = 0; col < width; ++col) {
    auto m = base;
    std::vector<uint8_t> rhs(static_cast<std::size_t>(l));
    for (int r = 0; r < l; ++r) rhs[static_cast<std::size_t>(r)] = (*ys[static_cast<std::size_t>(r)])[col];

    for (int piv = 0; piv < l; ++piv) {
      int row = piv;
      while (row < l && m[static_cast<std::size_t>(row)][static_cast<std::size_t>(piv)] == 0) ++row;
      if (row == l) return std::nullopt;  // singular; cannot happen with distinct points
      std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(row)]);
      std::swap(rhs[static_cast<std::size_t>(piv)], rhs[static_cast<std::size_t>(row)]);
      const uint8_t iv = peasant_inv(m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(piv)]);
      for (int c = 0; c < l; ++c)
        m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)] =
            peasant_mul(m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)], iv);
      rhs[static_cast<std::size_t>(piv)] = peasant_mul(rhs[static_cast<std::size_t>(piv)], iv);
      for (int r = 0; r < l; ++r) {
        if (r == piv) continue;
        const uint8_t f = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(piv)];
        if (!f) continue;
        for (int c = 0; c < l; ++c)
          m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] ^=
              peasant_mul(f, m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)]);
        rhs[static_cast<std::size_t>(r)] ^= peasant_mul(f, rhs[static_cast<std::size_t>(piv)]);
      }
    }
    // coeff now in rhs; evaluate at systematic points 0..l-1.
    for (int t = 0; t < l; ++t) {
      uint8_t acc = 0;
      const uint8_t x = static_cast<uint8_t>(t);
      for (int c = l - 1; c >= 0; --c) acc = static_cast<uint8_t>(peasant_mul(acc, x) ^ rhs[static_cast<std::size_t>(c)]);
      chunks[static_cast<std::size_t>(t)][col] = acc;
    }
  }
  return chunks;
}

double qfunc(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace {

std::string dump_bits(const Bits& b, std::size_t max_n = 64) {
  std::string s;
  for (std::size_t i = 0; i < b.size() && i < max_n; ++i) s += b[i] ? '1' : '0';
  if (b.size() > max_n) s += "...";
  return s;
}

OracleResult check_encoder(uint64_t seed) {
  OracleResult res{"conv_encode_vs_shift_register", true, ""};
  auto rng = make_rng({seed, 0xE4C0ull});
  for (int trial = 0; trial < 200 && res.passed; ++trial) {
    const std::size_t len = 1 + rng() % 96;
    Bits msg = random_bits(rng, len);
    const Bits a = fec::conv_encode(msg);
    const Bits b = shift_register_encode(msg, fec::kPolyA, fec::kPolyB, fec::kTailBits);
    if (a != b) {
      res.passed = false;
      res.detail = "input=" + dump_bits(msg) + " got=" + dump_bits(a) + " want=" + dump_bits(b);
    }
  }
  return res;
}

OracleResult check_viterbi(uint64_t seed, const ViterbiFn& viterbi) {
  OracleResult res{"viterbi_vs_exhaustive_ml", true, ""};
  auto rng = make_rng({seed, 0x17B1ull});
  std::normal_distribution<double> noise(0.0, 1.0);
  const int k = 10;
  for (int trial = 0; trial < 60 && res.passed; ++trial) {
    Bits msg = random_bits(rng, k);
    const Bits cw = fec::conv_encode(msg);
    SoftBits llrs(cw.size());
    for (std::size_t i = 0; i < cw.size(); ++i)
      llrs[i] = (cw[i] ? -2.0 : 2.0) + 1.5 * noise(rng);
    double gap = 0.0;
    const Bits want = exhaustive_ml_decode(llrs, k, &gap);
    if (gap < 1e-9) continue;  // ambiguous draw, skip
    const Bits got = viterbi(llrs);
    if (got != want) {
      res.passed = false;
      res.detail = "llr_seed_trial=" + std::to_string(trial) + " got=" + dump_bits(got) +
                   " want=" + dump_bits(want);
    }
  }
  return res;
}

OracleResult check_crc(uint64_t seed) {
  OracleResult res{"crc_vs_long_division", true, ""};
  auto rng = make_rng({seed, 0xC4Cull});
  for (int trial = 0; trial < 300 && res.passed; ++trial) {
    Bits msg = random_bits(rng, 1 + rng() % 128);
    const uint32_t a = fec::crc32_linear(msg);
    const uint32_t b = crc_long_division(msg);
    if (a != b) {
      res.passed = false;
      std::ostringstream os;
      os << "input=" << dump_bits(msg) << std::hex << " got=0x" << a << " want=0x" << b;
      res.detail = os.str();
    }
  }
  return res;
}

OracleResult check_llr(uint64_t seed) {
  OracleResult res{"logmax_vs_exact_llr", true, ""};
  auto rng = make_rng({seed, 0x11Aull});
  const auto schemes = phy::mode_schemes(phy::DecoderMode::SrNcma);
  const auto bank = phy::decoder_bank(phy::DecoderMode::SrNcma);
  const std::array<bool, 3> qpsk{false, false, true};

  // Realizations are built directly at the stated per-antenna SNR with
  // independent phases per antenna: this pins the max-log approximation
  // against the exact metric for the constellation geometry itself,
  // independent of the link budget the simulator applies on top.
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  auto direct = [&](double snr_db) {
    chan::ChannelRealization cr;
    const double lin = std::pow(10.0, snr_db / 10.0);
    for (int s = 0; s < 3; ++s) {
      const double mag = std::sqrt(qpsk[s] ? lin / 2.0 : lin);
      for (int r = 0; r < 2; ++r) cr.gain[s][r] = std::polar(mag, ph(rng));
    }
    return cr;
  };

  // Sign agreement at moderate SNR.
  int64_t agree = 0, total = 0;
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 400; ++trial) {
    const auto cr = direct(10.0);
    const auto jc = demod::JointConstellation::build(cr, schemes);
    for (int rep = 0; rep < 4; ++rep) {
      const auto& pt = jc.points[rng() % jc.points.size()];
      const double s = std::sqrt(cr.noise_var[0] / 2.0);
      const Cplx y1 = pt.img1 + Cplx(s * g(rng), s * g(rng));
      const Cplx y2 = pt.img2 + Cplx(s * g(rng), s * g(rng));
      for (const auto& t : bank) {
        demod::DemodOptions ex;
        ex.exact = true;
        ex.noise_var = cr.noise_var[0];
        const double le = demod::llr_per_symbol(y1, y2, jc, t, 0, ex);
        const double lm = demod::llr_per_symbol(y1, y2, jc, t, 0, {});
        ++total;
        if ((le >= 0) == (lm >= 0)) ++agree;
      }
    }
  }
  const double frac = static_cast<double>(agree) / static_cast<double>(total);
  if (frac < 0.99) {
    res.passed = false;
    res.detail = "sign agreement " + std::to_string(frac) + " < 0.99";
    return res;
  }

  // Noiseless placements must agree exactly in sign.
  for (int trial = 0; trial < 50 && res.passed; ++trial) {
    auto cr = direct(10.0);
    cr.noise_var = {1e-2, 1e-2};
    const auto jc = demod::JointConstellation::build(cr, schemes);
    for (std::size_t p = 0; p < jc.points.size() && res.passed; ++p) {
      for (const auto& t : bank) {
        demod::DemodOptions ex;
        ex.exact = true;
        ex.noise_var = cr.noise_var[0];
        const double le = demod::llr_per_symbol(jc.points[p].img1, jc.points[p].img2, jc, t, 0, ex);
        const double lm = demod::llr_per_symbol(jc.points[p].img1, jc.points[p].img2, jc, t, 0, {});
        if (std::abs(lm) > 1e-9 && (le >= 0) != (lm >= 0)) {
          res.passed = false;
          res.detail = "noiseless sign mismatch at point " + std::to_string(p) + " target " + t.label;
        }
      }
    }
  }
  return res;
}

OracleResult check_bridge(uint64_t seed) {
  OracleResult res{"phy_bridge_vs_subset_closure", true, ""};
  auto rng = make_rng({seed, 0xB41Dull});
  const int dim = 4;
  std::array<Bits, 4> truth;
  for (auto& t : truth) t = random_bits(rng, 96);
  const uint8_t masks[11] = {0x1, 0x2, 0x4, 0x8, 0x3, 0x5, 0x9, 0x6, 0xA, 0x7, 0xB};

  for (uint32_t sub = 0; sub < (1u << 11) && res.passed; ++sub) {
    std::vector<phy::DecodedEquation> eqs;
    std::vector<XorEquation> ref;
    for (int i = 0; i < 11; ++i) {
      if (!((sub >> i) & 1u)) continue;
      Bits payload(96, 0);
      for (int u = 0; u < dim; ++u)
        if ((masks[i] >> u) & 1u) payload = xor_bits(payload, truth[static_cast<std::size_t>(u)]);
      phy::DecodedEquation eq;
      eq.coeffs = masks[i];
      eq.dim = dim;
      eq.payload = payload;
      eqs.push_back(eq);
      ref.push_back({masks[i], payload});
    }
    const auto got = phy::phy_bridge(eqs).natives;
    const auto want = brute_force_recoverable(ref, dim);
    bool same = got.size() == want.size();
    if (same)
      for (const auto& [u, p] : want) {
        auto it = got.find(u);
        if (it == got.end() || it->second != p || p != truth[static_cast<std::size_t>(u)]) same = false;
      }
    if (!same) {
      res.passed = false;
      res.detail = "subset=" + std::to_string(sub) + " natives got=" + std::to_string(got.size()) +
                   " want=" + std::to_string(want.size());
    }
  }
  return res;
}

OracleResult check_rs(uint64_t seed) {
  OracleResult res{"rs_decode_vs_gauss_solver", true, ""};
  auto rng = make_rng({seed, 0x4547ull});
  for (int trial = 0; trial < 40 && res.passed; ++trial) {
    const int l = 2 + static_cast<int>(rng() % 7);
    const int n = 2 * l;
    mac::RsCode code(l, n);
    std::vector<Bytes> chunks(static_cast<std::size_t>(l));
    for (auto& c : chunks) {
      c.resize(12);
      for (auto& b : c) b = static_cast<uint8_t>(rng());
    }
    // Random subset of size l with distinct indices.
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<std::pair<int, Bytes>> pkts;
    for (int i = 0; i < l; ++i) pkts.emplace_back(idx[static_cast<std::size_t>(i)], code.encode(chunks, idx[static_cast<std::size_t>(i)]));

    const auto got = code.decode(pkts);
    const auto want = gauss_rs_decode(l, pkts);
    if (!got || !want || *got != chunks || *want != chunks) {
      res.passed = false;
      res.detail = "l=" + std::to_string(l) + " subset decode mismatch";
    }
  }
  return res;
}

OracleResult check_end_to_end(uint64_t seed) {
  OracleResult res{"noiseless_full_bank", true, ""};
  auto rng = make_rng({seed, 0xE2Eull});
  const auto schemes = phy::mode_schemes(phy::DecoderMode::SrNcma);
  const std::array<bool, 3> qpsk{false, false, true};
  for (int trial = 0; trial < 10 && res.passed; ++trial) {
    Bits pa = random_bits(rng, 64), pb = random_bits(rng, 64);
    Bits pi = random_bits(rng, 64), pq = random_bits(rng, 64);
    const auto sa = modem::bpsk_modulate(fec::conv_encode(fec::crc_attach(pa).bits()));
    const auto sb = modem::bpsk_modulate(fec::conv_encode(fec::crc_attach(pb).bits()));
    const auto sc = modem::qpsk_modulate_split(fec::conv_encode(fec::crc_attach(pi).bits()),
                                               fec::conv_encode(fec::crc_attach(pq).bits()));
    auto cr = chan::draw_realization({40.0, 40.0, 40.0}, qpsk, rng);
    auto rx = chan::transmit(sa, sb, sc, cr, rng);
    const auto eqs = phy::run_decoder_bank(rx, phy::DecoderMode::SrNcma);
    if (eqs.size() != 11) {
      res.passed = false;
      res.detail = "decoded " + std::to_string(eqs.size()) + "/11 streams at 40 dB";
    }
  }
  return res;
}

}  // namespace

std::vector<OracleResult> oracle_suite(uint64_t seed, const ViterbiFn& viterbi) {
  const ViterbiFn vit = viterbi ? viterbi : ViterbiFn(fec::viterbi_decode);
  std::vector<OracleResult> out;
  out.push_back(check_encoder(seed));
  out.push_back(check_viterbi(seed, vit));
  out.push_back(check_crc(seed));
  out.push_back(check_llr(seed));
  out.push_back(check_bridge(seed));
  out.push_back(check_rs(seed));
  out.push_back(check_end_to_end(seed));
  return out;
}

bool all_passed(const std::vector<OracleResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace ncma::oracle
