#pragma once

#include "ncma/common.hpp"

namespace ncma::fec {

// Rate-1/2 convolutional code, constraint length 7, generators 133/171 (octal).
// Zero-terminated: conv_encode appends 6 tail bits internally.
inline constexpr unsigned kPolyA = 0133;  // produces odd-numbered output bits
inline constexpr unsigned kPolyB = 0171;  // produces even-numbered output bits
inline constexpr int kTailBits = 6;

// CRC-32 with the 802.3 polynomial, zero initial register, no reflection and
// no final inversion. This variant is linear: crc(a^b) == crc(a)^crc(b),
// which keeps XORed packets self-checking.
inline constexpr uint32_t kCrcPoly = 0x04C11DB7u;
inline constexpr std::size_t kCrcBits = 32;

struct InfoPacket {
  Bits payload;
  uint32_t crc = 0;
  // payload followed by the 32 CRC bits, MSB first.
  Bits bits() const;
};

Bits conv_encode(const Bits& info);
// llrs: one value per code bit, positive = bit 0. Length must be even and
// >= 14 (one info bit plus the tail). Returns the ML info sequence with the
// tail stripped; metric ties resolve toward the all-zero branch.
Bits viterbi_decode(const SoftBits& llrs);

uint32_t crc32_linear(const Bits& payload);
InfoPacket crc_attach(const Bits& payload);
// bits = payload followed by 32 CRC bits.
bool crc_check(const Bits& bits);

}  // namespace ncma::fec
