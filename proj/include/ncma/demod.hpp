#pragma once

#include <array>
#include <string>

#include "ncma/channel.hpp"
#include "ncma/common.hpp"
#include "ncma/modem.hpp"

namespace ncma::demod {

enum class Component { None, I, Q };

// One decodable bit stream: an XOR combination a*V_A + b*V_B + c*V_C over
// GF(2). comp selects user C's rail and is meaningful only when c = 1 and C
// transmits split QPSK; whole-QPSK targets leave it None and produce two
// LLRs per symbol (I first, then Q).
struct DecodeTarget {
  uint8_t a = 0, b = 0, c = 0;
  Component comp = Component::None;
  std::string label;
};

// The joint receive constellation for one channel realization: every
// combination of the three users' per-symbol alphabets, with its image on
// both antennas and the sign each user contributes on each rail. BPSK users
// carry the same sign on both rails.
struct JointConstellation {
  struct Point {
    Cplx img1, img2;
    std::array<std::array<int8_t, 2>, 3> sign;  // sign[user][rail], +1 or -1
  };
  std::vector<Point> points;
  std::array<modem::Scheme, 3> schemes{};

  static JointConstellation build(const chan::ChannelRealization& real,
                                  const std::array<modem::Scheme, 3>& schemes);
};

struct DemodOptions {
  bool exact = false;      // exact log-sum-exp posterior (needs the noise variance)
  double noise_var = 1.0;  // antenna-1 noise variance, used by the exact path
  double weight2 = 1.0;    // distance weight for antenna 2 (noise_var1/noise_var2)
};

void validate_target(const JointConstellation& jc, const DecodeTarget& t);
// 2 when the target spans a whole-QPSK user, else 1.
int bits_per_symbol(const JointConstellation& jc, const DecodeTarget& t);

// LLR of one target bit from one received symbol pair. rail selects I(0)/Q(1)
// for whole-QPSK targets. Positive favors bit 0. By default this is the
// log-max rule: min squared distance over the bit-1 set minus the bit-0 set,
// summed across antennas; it needs no noise-variance estimate.
double llr_per_symbol(Cplx y1, Cplx y2, const JointConstellation& jc,
                      const DecodeTarget& t, int rail = 0,
                      const DemodOptions& opt = {});

// Per-codeword-bit LLRs for a whole slot; whole-QPSK targets yield two values
// per symbol in I,Q order.
SoftBits demod_stream(const chan::RxSlot& rx, const DecodeTarget& t,
                      const DemodOptions& opt = {});

// Same, for several targets at once; the per-symbol distance table is shared.
std::vector<SoftBits> demod_bank(const chan::RxSlot& rx,
                                 const std::vector<DecodeTarget>& targets,
                                 const DemodOptions& opt = {});

}  // namespace ncma::demod
