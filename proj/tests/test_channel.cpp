#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "ncma/channel.hpp"
#include "ncma/demod.hpp"
#include "ncma/oracle.hpp"

using namespace ncma;

namespace {

modem::SymbolStream bpsk_stream(const Bits& bits) { return modem::bpsk_modulate(bits); }

}  // namespace

TEST_CASE("gain magnitudes follow the configured snr budget") {
  auto rng = make_rng({5, 0xC4A2ull});
  const std::array<double, 3> snr{7.0, 9.0, 12.0};
  const std::array<bool, 3> qpsk{false, false, true};
  auto cr = chan::draw_realization(snr, qpsk, rng);
  CHECK(cr.noise_var[0] == 1.0);
  CHECK(cr.noise_var[1] == 1.0);
  for (int s = 0; s < 3; ++s) {
    const double lin = std::pow(10.0, snr[s] / 10.0);
    const double energy = qpsk[s] ? 2.0 : 1.0;
    for (int r = 0; r < 2; ++r) {
      const double want = lin * cr.noise_var[r] / (2.0 * chan::kLinkMargin * energy);
      CHECK(std::norm(cr.gain[s][r]) == doctest::Approx(want).epsilon(1e-12));
    }
  }
}

TEST_CASE("each user's phase is common to both antennas") {
  auto rng = make_rng({6, 0xC4A2ull});
  for (int trial = 0; trial < 20; ++trial) {
    auto cr = chan::draw_realization({8.0, 8.0, 12.0}, {false, false, true}, rng);
    for (int s = 0; s < 3; ++s) {
      CHECK(std::arg(cr.gain[s][0]) == doctest::Approx(std::arg(cr.gain[s][1])).epsilon(1e-12));
    }
    // Distinct users draw independent phases; equality would be a rng bug.
    CHECK(std::arg(cr.gain[0][0]) != std::arg(cr.gain[1][0]));
  }
}

TEST_CASE("noise_var_ratio scales antenna 2 noise and gain together") {
  auto rng1 = make_rng({7, 0xC4A2ull});
  auto rng2 = make_rng({7, 0xC4A2ull});
  auto base = chan::draw_realization({8.0, 8.0, 12.0}, {false, false, true}, rng1, 1.0);
  auto skew = chan::draw_realization({8.0, 8.0, 12.0}, {false, false, true}, rng2, 4.0);
  CHECK(skew.noise_var[1] == 4.0);
  for (int s = 0; s < 3; ++s) {
    // Antenna 1 untouched, antenna 2 gain power tracks its noise floor.
    CHECK(std::norm(skew.gain[s][0]) == doctest::Approx(std::norm(base.gain[s][0])));
    CHECK(std::norm(skew.gain[s][1]) == doctest::Approx(4.0 * std::norm(base.gain[s][1])));
  }
  CHECK_THROWS(chan::draw_realization({8.0, 8.0, 8.0}, {false, false, false}, rng1, 0.0));
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS(chan::draw_realization({inf, 8.0, 8.0}, {false, false, false}, rng1));
}

TEST_CASE("same seed reproduces the same realization and received slot") {
  auto mk = [] {
    auto rng = make_rng({11, 0xC4A2ull, 42});
    auto cr = chan::draw_realization({8.0, 8.0, 12.0}, {false, false, false}, rng);
    auto rng2 = make_rng({11, 0xC4A2ull, 43});
    Bits bits(64, 0);
    auto rx = chan::transmit(bpsk_stream(bits), bpsk_stream(bits), bpsk_stream(bits), cr, rng2);
    return rx;
  };
  auto a = mk(), b = mk();
  REQUIRE(a.y1.size() == b.y1.size());
  for (std::size_t k = 0; k < a.y1.size(); ++k) {
    CHECK(a.y1[k] == b.y1[k]);
    CHECK(a.y2[k] == b.y2[k]);
  }
}

TEST_CASE("received signal is the gain-weighted superposition plus noise") {
  // Zero noise variance isolates the deterministic part exactly.
  chan::ChannelRealization cr;
  cr.noise_var = {0.0, 0.0};
  cr.gain = {{{Cplx(0.3, 0.4), Cplx(-0.1, 0.2)},
              {Cplx(-0.5, 0.1), Cplx(0.7, 0.0)},
              {Cplx(0.2, -0.6), Cplx(0.0, 0.9)}}};
  auto rng = make_rng({12, 0xC4A2ull});
  auto xa = bpsk_stream({0, 1, 1});
  auto xb = bpsk_stream({1, 1, 0});
  auto xc = modem::qpsk_modulate_split({0, 0, 1}, {1, 0, 1});
  auto rx = chan::transmit(xa, xb, xc, cr, rng);
  for (std::size_t k = 0; k < 3; ++k) {
    Cplx w1 = cr.gain[0][0] * xa.symbols[k] + cr.gain[1][0] * xb.symbols[k] +
              cr.gain[2][0] * xc.symbols[k];
    Cplx w2 = cr.gain[0][1] * xa.symbols[k] + cr.gain[1][1] * xb.symbols[k] +
              cr.gain[2][1] * xc.symbols[k];
    CHECK(rx.y1[k] == w1);
    CHECK(rx.y2[k] == w2);
  }
  CHECK_THROWS(chan::transmit(xa, xb, bpsk_stream({0}), cr, rng));
}

TEST_CASE("noise is zero-mean, white, and sized by noise_var per antenna") {
  chan::ChannelRealization cr;  // all gains zero: the output is pure noise
  cr.noise_var = {1.0, 2.5};
  const std::size_t n = 100000;
  auto rng = make_rng({13, 0xC4A2ull});
  Bits zeros(n, 0);
  auto rx = chan::transmit(bpsk_stream(zeros), bpsk_stream(zeros), bpsk_stream(zeros), cr, rng);

  Cplx m1 = 0, m2 = 0;
  double p1 = 0, p2 = 0, re1 = 0, cross = 0, lag = 0;
  for (std::size_t k = 0; k < n; ++k) {
    m1 += rx.y1[k];
    m2 += rx.y2[k];
    p1 += std::norm(rx.y1[k]);
    p2 += std::norm(rx.y2[k]);
    re1 += rx.y1[k].real() * rx.y1[k].real();
    cross += (rx.y1[k] * std::conj(rx.y2[k])).real();
    if (k) lag += (rx.y1[k] * std::conj(rx.y1[k - 1])).real();
  }
  const double dn = static_cast<double>(n);
  CHECK(std::abs(m1) / dn < 0.02);
  CHECK(std::abs(m2) / dn < 0.02);
  CHECK(p1 / dn == doctest::Approx(1.0).epsilon(0.02));
  CHECK(p2 / dn == doctest::Approx(2.5).epsilon(0.02));
  // Real part carries half the power; streams and lags are uncorrelated.
  CHECK(re1 / dn == doctest::Approx(0.5).epsilon(0.03));
  CHECK(std::abs(cross) / dn < 0.03);
  CHECK(std::abs(lag) / dn < 0.03);
}

TEST_CASE("single-user error rate tracks the q-function") {
  // One bpsk user, equal real gains h on both antennas, unit noise. The ML
  // decision combines the antennas, so the bit error rate is Q(2h).
  const double h = 1.288;  // Q(2h) close to 5e-3
  chan::ChannelRealization cr;
  cr.gain[0] = {Cplx(h, 0), Cplx(h, 0)};

  const std::size_t n = 200000;
  auto rng = make_rng({14, 0xC4A2ull});
  Bits bits = random_bits(rng, n);
  auto rx = chan::transmit(bpsk_stream(bits), bpsk_stream(Bits(n, 0)), bpsk_stream(Bits(n, 0)),
                           cr, rng);
  rx.schemes = {modem::Scheme::Bpsk, modem::Scheme::Bpsk, modem::Scheme::Bpsk};

  demod::DecodeTarget t;
  t.a = 1;
  t.label = "A";
  SoftBits llrs = demod::demod_stream(rx, t);
  REQUIRE(llrs.size() == n);
  std::size_t errors = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const uint8_t hard = llrs[k] < 0 ? 1 : 0;
    if (hard != bits[k]) ++errors;
  }
  const double want = oracle::qfunc(2.0 * h) * static_cast<double>(n);
  CHECK(static_cast<double>(errors) > 0.75 * want);
  CHECK(static_cast<double>(errors) < 1.30 * want);
}
