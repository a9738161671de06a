#pragma once

#include "ncma/common.hpp"

namespace ncma::modem {

enum class Scheme { Bpsk, QpskStandard, QpskSplit };

struct SymbolStream {
  std::vector<Cplx> symbols;
  Scheme scheme = Scheme::Bpsk;
};

// bit v -> 1 - 2v
SymbolStream bpsk_modulate(const Bits& codeword);

// Symbol k carries codeword bits (2k-1, 2k) on (I, Q); input length must be even.
SymbolStream qpsk_modulate_standard(const Bits& codeword);

// Two independently encoded codewords ride the I and Q rails; equal lengths required.
SymbolStream qpsk_modulate_split(const Bits& codeword_i, const Bits& codeword_q);

// XOR demapping of two superposed BPSK symbols: (1 - xa*xb)/2.
int pnc_bpsk_map(int xa, int xb);

}  // namespace ncma::modem
