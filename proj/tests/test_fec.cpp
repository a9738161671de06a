#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "ncma/fec.hpp"
#include "ncma/oracle.hpp"

using namespace ncma;

namespace {

SoftBits hard_llrs(const Bits& cw, double mag = 4.0) {
  SoftBits out(cw.size());
  for (std::size_t i = 0; i < cw.size(); ++i) out[i] = cw[i] ? -mag : mag;
  return out;
}

}  // namespace

TEST_CASE("zero input gives the zero codeword") {
  Bits info(8, 0);
  Bits cw = fec::conv_encode(info);
  CHECK(cw.size() == 2 * (8 + fec::kTailBits));
  CHECK(std::all_of(cw.begin(), cw.end(), [](uint8_t b) { return b == 0; }));
}

TEST_CASE("single-bit impulse response") {
  // Generator taps read straight off 133/171 plus the zero tail.
  Bits cw = fec::conv_encode(Bits{1});
  Bits want{1, 1, 0, 1, 1, 1, 1, 1, 0, 0, 1, 0, 1, 1};
  CHECK(cw == want);
}

TEST_CASE("encoder matches a direct shift-register implementation") {
  auto rng = make_rng({17, 0xFECull});
  for (int trial = 0; trial < 100; ++trial) {
    Bits info = random_bits(rng, 16 + rng() % 120);
    CHECK(fec::conv_encode(info) ==
          oracle::shift_register_encode(info, fec::kPolyA, fec::kPolyB, 6));
  }
}

TEST_CASE("encoder is linear over GF(2)") {
  auto rng = make_rng({18, 0xFECull});
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 8 + rng() % 128;
    Bits a = random_bits(rng, n), b = random_bits(rng, n);
    CHECK(fec::conv_encode(xor_bits(a, b)) ==
          xor_bits(fec::conv_encode(a), fec::conv_encode(b)));
  }
}

TEST_CASE("viterbi round-trips clean codewords") {
  auto rng = make_rng({19, 0xFECull});
  for (int trial = 0; trial < 50; ++trial) {
    Bits info = random_bits(rng, 8 + rng() % 200);
    CHECK(fec::viterbi_decode(hard_llrs(fec::conv_encode(info))) == info);
  }
}

TEST_CASE("viterbi corrects isolated hard flips") {
  auto rng = make_rng({20, 0xFECull});
  for (int trial = 0; trial < 50; ++trial) {
    Bits info = random_bits(rng, 64);
    Bits cw = fec::conv_encode(info);
    // Two flips far enough apart that the free distance covers each alone.
    std::size_t p1 = rng() % 40, p2 = 80 + rng() % 40;
    cw[p1] ^= 1;
    cw[p2] ^= 1;
    CHECK(fec::viterbi_decode(hard_llrs(cw)) == info);
  }
}

TEST_CASE("viterbi agrees with exhaustive ML on noisy soft input") {
  auto rng = make_rng({21, 0xFECull});
  std::normal_distribution<double> g(0.0, 1.0);
  const int k = 10;
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Bits info = random_bits(rng, k);
    Bits cw = fec::conv_encode(info);
    SoftBits llrs(cw.size());
    for (std::size_t i = 0; i < cw.size(); ++i)
      llrs[i] = 2.0 * (1.0 - 2.0 * cw[i]) + 1.5 * g(rng);
    double gap = 0.0;
    Bits ml = oracle::exhaustive_ml_decode(llrs, k, &gap);
    if (gap < 1e-9) continue;  // metric tie, either answer defensible
    CHECK(fec::viterbi_decode(llrs) == ml);
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("all-zero llrs decode to the all-zero message") {
  // Every path has metric zero; ties must resolve toward the zero branch.
  SoftBits flat(2 * (32 + fec::kTailBits), 0.0);
  Bits out = fec::viterbi_decode(flat);
  CHECK(out.size() == 32);
  CHECK(std::all_of(out.begin(), out.end(), [](uint8_t b) { return b == 0; }));
}

TEST_CASE("crc matches polynomial long division") {
  auto rng = make_rng({22, 0xFECull});
  for (int trial = 0; trial < 200; ++trial) {
    Bits p = random_bits(rng, 8 + rng() % 160);
    CHECK(fec::crc32_linear(p) == oracle::crc_long_division(p));
  }
}

TEST_CASE("crc frozen value") {
  // Bits of 0xA5 0x3C 0x7E, MSB first.
  Bits p;
  for (uint8_t byte : {0xA5, 0x3C, 0x7E})
    for (int i = 7; i >= 0; --i) p.push_back((byte >> i) & 1u);
  CHECK(fec::crc32_linear(p) == 0xF25DBFD8u);
}

TEST_CASE("crc is linear, so xor packets stay self-checking") {
  auto rng = make_rng({23, 0xFECull});
  for (int trial = 0; trial < 100; ++trial) {
    Bits a = random_bits(rng, 96), b = random_bits(rng, 96);
    CHECK(fec::crc32_linear(xor_bits(a, b)) ==
          (fec::crc32_linear(a) ^ fec::crc32_linear(b)));
    // The same holds through attach/check: xor of two valid frames is valid.
    Bits fa = fec::crc_attach(a).bits(), fb = fec::crc_attach(b).bits();
    CHECK(fec::crc_check(xor_bits(fa, fb)));
  }
}

TEST_CASE("crc detects any single corrupted bit") {
  auto rng = make_rng({24, 0xFECull});
  Bits frame = fec::crc_attach(random_bits(rng, 64)).bits();
  REQUIRE(fec::crc_check(frame));
  for (std::size_t i = 0; i < frame.size(); ++i) {
    frame[i] ^= 1;
    CHECK_FALSE(fec::crc_check(frame));
    frame[i] ^= 1;
  }
}
