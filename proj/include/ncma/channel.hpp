#pragma once

#include <array>

#include "ncma/common.hpp"
#include "ncma/modem.hpp"

namespace ncma::chan {

// Flat block-fading uplink: three users, two receive antennas. Gains are
// constant within a slot. Noise is circularly-symmetric complex Gaussian,
// variance noise_var[r] per antenna (real and imaginary parts each half).
struct ChannelRealization {
  std::array<std::array<Cplx, 2>, 3> gain{};  // gain[user][antenna]
  std::array<double, 2> noise_var{1.0, 1.0};
};

// Fixed front-end margin applied when mapping configured SNR to gain
// magnitudes. Calibrated once against the throughput operating points the
// simulator is meant to reproduce; changing it shifts every curve along the
// SNR axis.
inline constexpr double kLinkMargin = 3.5;

// Gain magnitudes are set from the configured per-user SNR with unit noise
// variance on antenna 1: the per-user SNR budget is split across the two
// antenna paths and kLinkMargin, with QPSK symbol energy 2 accounted per
// complex symbol. The antenna responses are fully correlated: one phase per
// user (i.i.d. uniform over [0, 2pi)) applied at both antennas, so the array
// contributes noise averaging rather than spatial separation.
ChannelRealization draw_realization(const std::array<double, 3>& snr_db,
                                    const std::array<bool, 3>& user_qpsk,
                                    std::mt19937_64& rng,
                                    double noise_var_ratio = 1.0);

struct RxSlot {
  std::vector<Cplx> y1, y2;
  ChannelRealization realization;
  std::array<modem::Scheme, 3> schemes{};
  int slot = 0;
  // Transmitted streams, kept for oracle checks only.
  std::array<modem::SymbolStream, 3> truth;
};

RxSlot transmit(const modem::SymbolStream& xa, const modem::SymbolStream& xb,
                const modem::SymbolStream& xc, const ChannelRealization& real,
                std::mt19937_64& rng);

}  // namespace ncma::chan
