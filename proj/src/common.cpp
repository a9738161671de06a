#include "ncma/common.hpp"

#include <stdexcept>

namespace ncma {

Bits xor_bits(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

Bits random_bits(std::mt19937_64& rng, std::size_t n) {
  Bits out(n);
  uint64_t word = 0;
  int left = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (left == 0) {
      word = rng();
      left = 64;
    }
    out[i] = static_cast<uint8_t>(word & 1u);
    word >>= 1;
    --left;
  }
  return out;
}

Bytes pack_bits(const Bits& bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1u) out[i / 8] |= static_cast<uint8_t>(0x80u >> (i % 8));
  }
  return out;
}

Bits unpack_bits(const Bytes& bytes, std::size_t n_bits) {
  if (n_bits > bytes.size() * 8) throw std::invalid_argument("unpack_bits: not enough bytes");
  Bits out(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    out[i] = (bytes[i / 8] >> (7 - i % 8)) & 1u;
  }
  return out;
}

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t substream_seed(std::initializer_list<uint64_t> parts) {
  uint64_t h = 0x6a09e667f3bcc908ull;
  for (uint64_t p : parts) h = mix64(h ^ mix64(p));
  return h;
}

std::mt19937_64 make_rng(std::initializer_list<uint64_t> parts) {
  return std::mt19937_64(substream_seed(parts));
}

}  // namespace ncma
