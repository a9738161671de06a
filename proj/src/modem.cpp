#include "ncma/modem.hpp"

#include <stdexcept>

namespace ncma::modem {

namespace {
inline double level(uint8_t v) { return 1.0 - 2.0 * (v & 1u); }
}

SymbolStream bpsk_modulate(const Bits& codeword) {
  if (codeword.empty()) throw std::invalid_argument("bpsk_modulate: empty codeword");
  SymbolStream s;
  s.scheme = Scheme::Bpsk;
  s.symbols.reserve(codeword.size());
  for (uint8_t v : codeword) s.symbols.emplace_back(level(v), 0.0);
  return s;
}

SymbolStream qpsk_modulate_standard(const Bits& codeword) {
  if (codeword.empty() || codeword.size() % 2 != 0)
    throw std::invalid_argument("qpsk_modulate_standard: codeword length must be even");
  SymbolStream s;
  s.scheme = Scheme::QpskStandard;
  s.symbols.reserve(codeword.size() / 2);
  for (std::size_t k = 0; k < codeword.size(); k += 2)
    s.symbols.emplace_back(level(codeword[k]), level(codeword[k + 1]));
  return s;
}

SymbolStream qpsk_modulate_split(const Bits& codeword_i, const Bits& codeword_q) {
  if (codeword_i.empty() || codeword_i.size() != codeword_q.size())
    throw std::invalid_argument("qpsk_modulate_split: rail codewords must have equal nonzero length");
  SymbolStream s;
  s.scheme = Scheme::QpskSplit;
  s.symbols.reserve(codeword_i.size());
  for (std::size_t k = 0; k < codeword_i.size(); ++k)
    s.symbols.emplace_back(level(codeword_i[k]), level(codeword_q[k]));
  return s;
}

int pnc_bpsk_map(int xa, int xb) {
  if ((xa != 1 && xa != -1) || (xb != 1 && xb != -1))
    throw std::invalid_argument("pnc_bpsk_map: inputs must be +1 or -1");
  return (1 - xa * xb) / 2;
}

}  // namespace ncma::modem
