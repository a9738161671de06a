#include "ncma/fec.hpp"

#include <array>
#include <bit>
#include <stdexcept>

namespace ncma::fec {

namespace {

inline uint8_t parity7(unsigned x) { return static_cast<uint8_t>(std::popcount(x) & 1); }

// State holds the six delay elements, newest in bit 5. The encoder window is
// (input << 6) | state, matching the octal generator taps MSB-first.
struct Trellis {
  std::array<std::array<uint8_t, 2>, 64> out;   // (oA<<1)|oB per (state, input)
  std::array<std::array<uint8_t, 2>, 64> next;
  Trellis() {
    for (int p = 0; p < 64; ++p) {
      for (int u = 0; u < 2; ++u) {
        const unsigned w = (static_cast<unsigned>(u) << 6) | static_cast<unsigned>(p);
        out[p][u] = static_cast<uint8_t>((parity7(w & kPolyA) << 1) | parity7(w & kPolyB));
        next[p][u] = static_cast<uint8_t>(w >> 1);
      }
    }
  }
};

const Trellis& trellis() {
  static const Trellis t;
  return t;
}

}  // namespace

Bits conv_encode(const Bits& info) {
  if (info.empty()) throw std::invalid_argument("conv_encode: empty input");
  Bits out;
  out.reserve(2 * (info.size() + kTailBits));
  unsigned w = 0;
  auto push = [&](unsigned u) {
    w = ((w >> 1) | (u << 6)) & 0x7Fu;
    out.push_back(parity7(w & kPolyA));
    out.push_back(parity7(w & kPolyB));
  };
  for (uint8_t b : info) push(b & 1u);
  for (int i = 0; i < kTailBits; ++i) push(0);
  return out;
}

Bits viterbi_decode(const SoftBits& llrs) {
  if (llrs.size() % 2 != 0 || llrs.size() < 2 * (1 + kTailBits))
    throw std::invalid_argument("viterbi_decode: llr length must be even and >= 14");
  const Trellis& tr = trellis();
  const std::size_t steps = llrs.size() / 2;
  constexpr double kFloor = -1e18;

  std::array<double, 64> metric;
  std::array<double, 64> nm;
  metric.fill(kFloor);
  metric[0] = 0.0;  // encoder starts zeroed
  std::vector<std::array<uint8_t, 64>> surv(steps);

  for (std::size_t t = 0; t < steps; ++t) {
    const double l0 = llrs[2 * t];
    const double l1 = llrs[2 * t + 1];
    // metric gain for an emitted pair (oA,oB): +llr when the bit is 0
    const double bm[4] = {l0 + l1, l0 - l1, -l0 + l1, -l0 - l1};
    auto& sv = surv[t];
    for (int n = 0; n < 64; ++n) {
      const int u = n >> 5;
      const int p0 = (n & 0x1F) << 1;
      const int p1 = p0 | 1;
      const double m0 = metric[p0] + bm[tr.out[p0][u]];
      const double m1 = metric[p1] + bm[tr.out[p1][u]];
      if (m0 >= m1) {  // tie keeps the predecessor whose dropped bit is 0
        nm[n] = m0;
        sv[n] = 0;
      } else {
        nm[n] = m1;
        sv[n] = 1;
      }
    }
    metric = nm;
  }

  // Zero termination: trace back from state 0.
  Bits info(steps);
  int s = 0;
  for (std::size_t t = steps; t-- > 0;) {
    info[t] = static_cast<uint8_t>(s >> 5);
    s = ((s & 0x1F) << 1) | surv[t][s];
  }
  info.resize(steps - kTailBits);
  return info;
}

uint32_t crc32_linear(const Bits& payload) {
  uint32_t reg = 0;
  for (uint8_t b : payload) {
    const uint32_t top = (reg >> 31) ^ (b & 1u);
    reg <<= 1;
    if (top) reg ^= kCrcPoly;
  }
  return reg;
}

Bits InfoPacket::bits() const {
  Bits out = payload;
  out.reserve(out.size() + kCrcBits);
  for (int i = 31; i >= 0; --i) out.push_back(static_cast<uint8_t>((crc >> i) & 1u));
  return out;
}

InfoPacket crc_attach(const Bits& payload) {
  if (payload.empty()) throw std::invalid_argument("crc_attach: empty payload");
  return InfoPacket{payload, crc32_linear(payload)};
}

bool crc_check(const Bits& bits) {
  if (bits.size() <= kCrcBits) throw std::invalid_argument("crc_check: input shorter than a CRC");
  Bits payload(bits.begin(), bits.end() - static_cast<std::ptrdiff_t>(kCrcBits));
  uint32_t stored = 0;
  for (std::size_t i = bits.size() - kCrcBits; i < bits.size(); ++i)
    stored = (stored << 1) | (bits[i] & 1u);
  return crc32_linear(payload) == stored;
}

}  // namespace ncma::fec
