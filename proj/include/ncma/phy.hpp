#pragma once

#include <map>
#include <string>

#include "ncma/channel.hpp"
#include "ncma/demod.hpp"

namespace ncma::phy {

enum class DecoderMode { RateIdenticalBpsk, RateIdenticalQpsk, DrNcma, SrNcma };

const char* mode_name(DecoderMode mode);
DecoderMode mode_from_name(const std::string& name);

// Per-user modulation implied by the mode (users A, B, C).
std::array<modem::Scheme, 3> mode_schemes(DecoderMode mode);

// Unknowns a slot equation ranges over: A, B, C_I, C_Q in split mode,
// otherwise A, B, C. Bit i of a coefficient mask selects unknown i.
int mode_dim(DecoderMode mode);

// Every stream the receiver attempts for this mode: all single-user (MUD)
// targets plus every XOR (PNC) combination the channel code supports.
std::vector<demod::DecodeTarget> decoder_bank(DecoderMode mode);

uint8_t target_coeff_mask(DecoderMode mode, const demod::DecodeTarget& t);

// One CRC-valid decoded stream: an XOR equation over the slot's unknowns.
// payload holds the decoded info bits including the CRC field.
struct DecodedEquation {
  uint8_t coeffs = 0;
  int dim = 3;
  Bits payload;
  int slot = 0;
  std::string source;
};

struct SlotOutcome {
  std::map<int, Bits> natives;           // unknown index -> payload (with CRC)
  std::vector<DecodedEquation> unresolved;  // independent rows that resolve no unknown
  int anomalies = 0;                     // inconsistent duplicates dropped
};

struct BankOptions {
  double llr_clip = 50.0;
  bool exact = false;
  bool mud_only = false;
};

using TraceRow = std::pair<std::string, bool>;  // decoder label, CRC pass

std::vector<DecodedEquation> run_decoder_bank(const chan::RxSlot& rx, DecoderMode mode,
                                              const BankOptions& opt = {},
                                              std::vector<TraceRow>* trace = nullptr);

// Gaussian elimination over GF(2) with payloads XORed in lockstep. Unit rows
// come back as natives; the rest are reduced, mutually independent leftovers.
SlotOutcome phy_bridge(const std::vector<DecodedEquation>& eqs);

}  // namespace ncma::phy
