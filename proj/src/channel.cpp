#include "ncma/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace ncma::chan {

ChannelRealization draw_realization(const std::array<double, 3>& snr_db,
                                    const std::array<bool, 3>& user_qpsk,
                                    std::mt19937_64& rng, double noise_var_ratio) {
  if (noise_var_ratio <= 0.0) throw std::invalid_argument("draw_realization: noise_var_ratio must be positive");
  ChannelRealization cr;
  cr.noise_var = {1.0, noise_var_ratio};
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  for (int s = 0; s < 3; ++s) {
    if (!std::isfinite(snr_db[s])) throw std::invalid_argument("draw_realization: SNR must be finite");
    const double lin = std::pow(10.0, snr_db[s] / 10.0);
    const double energy = user_qpsk[s] ? 2.0 : 1.0;
    // One oscillator per user: both AP antennas see the same phase, so the
    // array adds noise averaging but no spatial separation. The link budget
    // divides the nominal SNR across the two antenna paths and a fixed
    // front-end margin (kLinkMargin); energy 2 keeps the QPSK definition per
    // complex symbol.
    const double ph = phase(rng);
    for (int r = 0; r < 2; ++r) {
      const double mag = std::sqrt(lin * cr.noise_var[r] / (2.0 * kLinkMargin * energy));
      cr.gain[s][r] = std::polar(mag, ph);
    }
  }
  return cr;
}

RxSlot transmit(const modem::SymbolStream& xa, const modem::SymbolStream& xb,
                const modem::SymbolStream& xc, const ChannelRealization& real,
                std::mt19937_64& rng) {
  const std::size_t n = xa.symbols.size();
  if (n == 0 || xb.symbols.size() != n || xc.symbols.size() != n)
    throw std::invalid_argument("transmit: streams must have equal nonzero length");

  RxSlot rx;
  rx.realization = real;
  rx.schemes = {xa.scheme, xb.scheme, xc.scheme};
  rx.truth = {xa, xb, xc};
  rx.y1.resize(n);
  rx.y2.resize(n);

  std::normal_distribution<double> g(0.0, 1.0);
  const double s1 = std::sqrt(real.noise_var[0] / 2.0);
  const double s2 = std::sqrt(real.noise_var[1] / 2.0);
  const std::array<const modem::SymbolStream*, 3> xs{&xa, &xb, &xc};
  for (std::size_t k = 0; k < n; ++k) {
    Cplx sum1 = 0.0, sum2 = 0.0;
    for (int s = 0; s < 3; ++s) {
      sum1 += real.gain[s][0] * xs[s]->symbols[k];
      sum2 += real.gain[s][1] * xs[s]->symbols[k];
    }
    rx.y1[k] = sum1 + Cplx(s1 * g(rng), s1 * g(rng));
    rx.y2[k] = sum2 + Cplx(s2 * g(rng), s2 * g(rng));
  }
  return rx;
}

}  // namespace ncma::chan
