#include "ncma/phy.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "ncma/fec.hpp"

namespace ncma::phy {

namespace {

using demod::Component;
using demod::DecodeTarget;

DecodeTarget mk(uint8_t a, uint8_t b, uint8_t c, Component comp, const char* label) {
  DecodeTarget t;
  t.a = a;
  t.b = b;
  t.c = c;
  t.comp = comp;
  t.label = label;
  return t;
}

}  // namespace

const char* mode_name(DecoderMode mode) {
  switch (mode) {
    case DecoderMode::RateIdenticalBpsk: return "RATE_IDENTICAL_BPSK";
    case DecoderMode::RateIdenticalQpsk: return "RATE_IDENTICAL_QPSK";
    case DecoderMode::DrNcma: return "DR_NCMA";
    case DecoderMode::SrNcma: return "SR_NCMA";
  }
  return "?";
}

DecoderMode mode_from_name(const std::string& name) {
  if (name == "RATE_IDENTICAL_BPSK") return DecoderMode::RateIdenticalBpsk;
  if (name == "RATE_IDENTICAL_QPSK") return DecoderMode::RateIdenticalQpsk;
  if (name == "DR_NCMA") return DecoderMode::DrNcma;
  if (name == "SR_NCMA") return DecoderMode::SrNcma;
  throw std::invalid_argument("unknown mode: " + name);
}

std::array<modem::Scheme, 3> mode_schemes(DecoderMode mode) {
  using modem::Scheme;
  switch (mode) {
    case DecoderMode::RateIdenticalBpsk: return {Scheme::Bpsk, Scheme::Bpsk, Scheme::Bpsk};
    case DecoderMode::RateIdenticalQpsk:
      return {Scheme::QpskStandard, Scheme::QpskStandard, Scheme::QpskStandard};
    case DecoderMode::DrNcma: return {Scheme::Bpsk, Scheme::Bpsk, Scheme::QpskStandard};
    case DecoderMode::SrNcma: return {Scheme::Bpsk, Scheme::Bpsk, Scheme::QpskSplit};
  }
  return {};
}

int mode_dim(DecoderMode mode) { return mode == DecoderMode::SrNcma ? 4 : 3; }

std::vector<DecodeTarget> decoder_bank(DecoderMode mode) {
  using C = Component;
  if (mode == DecoderMode::SrNcma) {
    return {
        mk(1, 0, 0, C::None, "A"),
        mk(0, 1, 0, C::None, "B"),
        mk(0, 0, 1, C::I, "CI"),
        mk(0, 0, 1, C::Q, "CQ"),
        mk(1, 1, 0, C::None, "A^B"),
        mk(1, 0, 1, C::I, "A^CI"),
        mk(1, 0, 1, C::Q, "A^CQ"),
        mk(0, 1, 1, C::I, "B^CI"),
        mk(0, 1, 1, C::Q, "B^CQ"),
        mk(1, 1, 1, C::I, "A^B^CI"),
        mk(1, 1, 1, C::Q, "A^B^CQ"),
    };
  }
  if (mode == DecoderMode::DrNcma) {
    return {
        mk(1, 0, 0, C::None, "A"),
        mk(0, 1, 0, C::None, "B"),
        mk(0, 0, 1, C::None, "C"),
        mk(1, 1, 0, C::None, "A^B"),
    };
  }
  return {
      mk(1, 0, 0, C::None, "A"),
      mk(0, 1, 0, C::None, "B"),
      mk(0, 0, 1, C::None, "C"),
      mk(1, 1, 0, C::None, "A^B"),
      mk(1, 0, 1, C::None, "A^C"),
      mk(0, 1, 1, C::None, "B^C"),
      mk(1, 1, 1, C::None, "A^B^C"),
  };
}

uint8_t target_coeff_mask(DecoderMode mode, const DecodeTarget& t) {
  uint8_t m = 0;
  if (t.a) m |= 1u;
  if (t.b) m |= 2u;
  if (t.c) {
    if (mode == DecoderMode::SrNcma)
      m |= (t.comp == Component::Q) ? 8u : 4u;
    else
      m |= 4u;
  }
  return m;
}

std::vector<DecodedEquation> run_decoder_bank(const chan::RxSlot& rx, DecoderMode mode,
                                              const BankOptions& opt,
                                              std::vector<TraceRow>* trace) {
  std::vector<DecodeTarget> bank = decoder_bank(mode);
  if (opt.mud_only) {
    std::erase_if(bank, [](const DecodeTarget& t) { return int(t.a) + t.b + t.c != 1; });
  }

  demod::DemodOptions dopt;
  dopt.exact = opt.exact;
  dopt.noise_var = rx.realization.noise_var[0];
  dopt.weight2 = rx.realization.noise_var[0] / rx.realization.noise_var[1];
  std::vector<SoftBits> soft = demod_bank(rx, bank, dopt);

  std::vector<DecodedEquation> eqs;
  for (std::size_t i = 0; i < bank.size(); ++i) {
    for (double& v : soft[i]) v = std::clamp(v, -opt.llr_clip, opt.llr_clip);
    Bits info = fec::viterbi_decode(soft[i]);
    const bool ok = fec::crc_check(info);
    if (trace) trace->emplace_back(bank[i].label, ok);
    if (!ok) continue;
    DecodedEquation eq;
    eq.coeffs = target_coeff_mask(mode, bank[i]);
    eq.dim = mode_dim(mode);
    eq.payload = std::move(info);
    eq.slot = rx.slot;
    eq.source = bank[i].label;
    eqs.push_back(std::move(eq));
  }
  return eqs;
}

SlotOutcome phy_bridge(const std::vector<DecodedEquation>& eqs) {
  SlotOutcome out;
  if (eqs.empty()) return out;
  const int dim = eqs.front().dim;

  struct Row {
    uint8_t mask;
    Bits payload;
    int slot;
  };
  std::vector<Row> rows;
  std::array<int, 8> pivot_row;
  pivot_row.fill(-1);

  for (const DecodedEquation& eq : eqs) {
    if (eq.dim != dim) throw std::invalid_argument("phy_bridge: mixed equation dimensions");
    uint8_t mask = eq.coeffs;
    Bits payload = eq.payload;
    for (int u = 0; u < dim; ++u) {
      if (((mask >> u) & 1u) && pivot_row[u] >= 0) {
        const Row& r = rows[pivot_row[u]];
        if (r.payload.size() != payload.size())
          throw std::invalid_argument("phy_bridge: payload length mismatch");
        mask ^= r.mask;
        payload = xor_bits(payload, r.payload);
      }
    }
    if (mask == 0) {
      // duplicate of the existing span; payload must agree or it is bogus
      bool zero = std::all_of(payload.begin(), payload.end(), [](uint8_t b) { return b == 0; });
      if (!zero) ++out.anomalies;
      continue;
    }
    const int piv = std::countr_zero(mask);
    pivot_row[piv] = static_cast<int>(rows.size());
    rows.push_back(Row{mask, std::move(payload), eq.slot});
  }

  // Back-substitute so each pivot appears in exactly one row.
  for (int u = dim - 1; u >= 0; --u) {
    if (pivot_row[u] < 0) continue;
    const Row& src = rows[pivot_row[u]];
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == pivot_row[u]) continue;
      if ((rows[i].mask >> u) & 1u) {
        rows[i].mask ^= src.mask;
        rows[i].payload = xor_bits(rows[i].payload, src.payload);
      }
    }
  }

  for (Row& r : rows) {
    if (std::popcount(r.mask) == 1) {
      out.natives[std::countr_zero(r.mask)] = std::move(r.payload);
    } else {
      DecodedEquation eq;
      eq.coeffs = r.mask;
      eq.dim = dim;
      eq.payload = std::move(r.payload);
      eq.slot = r.slot;
      eq.source = "bridge";
      out.unresolved.push_back(std::move(eq));
    }
  }
  return out;
}

}  // namespace ncma::phy
