#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace ncma {

// One element per bit, values 0 or 1.
using Bits = std::vector<uint8_t>;
using Bytes = std::vector<uint8_t>;
// LLR per code bit; positive means bit 0 is more likely.
using SoftBits = std::vector<double>;
using Cplx = std::complex<double>;

Bits xor_bits(const Bits& a, const Bits& b);
Bits random_bits(std::mt19937_64& rng, std::size_t n);

// MSB-first packing; last byte zero-padded.
Bytes pack_bits(const Bits& bits);
Bits unpack_bits(const Bytes& bytes, std::size_t n_bits);

// splitmix64 finalizer; used to derive independent sub-stream seeds.
uint64_t mix64(uint64_t x);
uint64_t substream_seed(std::initializer_list<uint64_t> parts);
std::mt19937_64 make_rng(std::initializer_list<uint64_t> parts);

}  // namespace ncma
