#pragma once

#include <optional>
#include <utility>

#include "ncma/common.hpp"

namespace ncma::mac {

namespace gf256 {
// GF(2^8) with the 0x11D reduction polynomial, generator 2.
uint8_t mul(uint8_t a, uint8_t b);
uint8_t inv(uint8_t a);
}  // namespace gf256

// Systematic MDS erasure code. Packet index i (1-based) is the value of the
// column polynomial at field point i-1; indices 1..l are the message chunks
// verbatim, so any l packets with distinct indices reconstruct the message.
class RsCode {
 public:
  RsCode(int l, int n);

  int l() const { return l_; }
  int n() const { return n_; }

  // chunks: l equal-sized byte rows. index in [1, n].
  Bytes encode(const std::vector<Bytes>& chunks, int index) const;

  // Any >= l packets with distinct indices; duplicates count once. Returns
  // nothing when fewer than l distinct indices are present.
  std::optional<std::vector<Bytes>> decode(const std::vector<std::pair<int, Bytes>>& packets) const;

  // Normalized Lagrange basis polynomial for systematic point i.
  const std::vector<uint8_t>& basis(int i) const { return basis_[static_cast<std::size_t>(i)]; }

 private:
  int l_, n_;
  std::vector<std::vector<uint8_t>> basis_;
};

// Caches the coefficient form of one message so per-packet evaluation is cheap.
class RsEncoder {
 public:
  RsEncoder(const RsCode& code, std::vector<Bytes> chunks);
  Bytes packet(int index) const;

 private:
  const RsCode* code_;
  std::vector<Bytes> chunks_;
  mutable std::vector<Bytes> coeff_;  // coeff_[j] = polynomial coefficients of byte column j
};

// Bit-level wrappers: a message is l contiguous chunks of k_bits bits. The
// field symbols are bytes, so k_bits must be a multiple of 8; callers with
// odd frame sizes pad outside the code (see MacConfig::pad_bits).
Bits rs_encode_packet(const RsCode& code, const Bits& message, int k_bits, int index);
std::optional<Bits> rs_decode_message(const RsCode& code, int k_bits,
                                      const std::vector<std::pair<int, Bits>>& packets);

}  // namespace ncma::mac
