#include "ncma/rs.hpp"

#include <map>
#include <stdexcept>

namespace ncma::mac {

namespace gf256 {

namespace {
struct Tables {
  uint8_t exp[512];
  uint8_t log[256];
  Tables() {
    uint16_t x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = static_cast<uint8_t>(x);
      log[x] = static_cast<uint8_t>(i);
      x <<= 1;
      if (x & 0x100) x ^= 0x11D;
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
    log[0] = 0;
  }
};
const Tables& tables() {
  static const Tables t;
  return t;
}
}  // namespace

uint8_t mul(uint8_t a, uint8_t b) {
  if (a == 0 || b == 0) return 0;
  const Tables& t = tables();
  return t.exp[t.log[a] + t.log[b]];
}

uint8_t inv(uint8_t a) {
  if (a == 0) throw std::domain_error("gf256: inverse of zero");
  const Tables& t = tables();
  return t.exp[255 - t.log[a]];
}

}  // namespace gf256

namespace {

using gf256::inv;
using gf256::mul;

// poly(x) via Horner, coefficients stored low-to-high.
uint8_t eval_poly(const std::vector<uint8_t>& coeff, uint8_t x) {
  uint8_t acc = 0;
  for (std::size_t i = coeff.size(); i-- > 0;) acc = static_cast<uint8_t>(mul(acc, x) ^ coeff[i]);
  return acc;
}

}  // namespace

RsCode::RsCode(int l, int n) : l_(l), n_(n) {
  if (l < 1 || n < l || n > 256) throw std::invalid_argument("RsCode: need 1 <= l <= n <= 256");

  // M(x) = prod_{i<l} (x + i); addition doubles as subtraction here.
  std::vector<uint8_t> master(1, 1);
  for (int i = 0; i < l_; ++i) {
    const uint8_t xi = static_cast<uint8_t>(i);
    std::vector<uint8_t> next(master.size() + 1, 0);
    for (std::size_t d = 0; d < master.size(); ++d) {
      next[d + 1] ^= master[d];
      next[d] ^= mul(master[d], xi);
    }
    master = std::move(next);
  }

  // basis_[i] = M(x) / (x + i), scaled so it is 1 at x = i.
  basis_.resize(static_cast<std::size_t>(l_));
  for (int i = 0; i < l_; ++i) {
    const uint8_t xi = static_cast<uint8_t>(i);
    std::vector<uint8_t> q(static_cast<std::size_t>(l_), 0);
    uint8_t carry = master[static_cast<std::size_t>(l_)];
    for (int d = l_ - 1; d >= 0; --d) {
      q[static_cast<std::size_t>(d)] = carry;
      carry = static_cast<uint8_t>(master[static_cast<std::size_t>(d)] ^ mul(carry, xi));
    }
    const uint8_t wi = inv(eval_poly(q, xi));
    for (uint8_t& c : q) c = mul(c, wi);
    basis_[static_cast<std::size_t>(i)] = std::move(q);
  }
}

Bytes RsCode::encode(const std::vector<Bytes>& chunks, int index) const {
  if (static_cast<int>(chunks.size()) != l_)
    throw std::invalid_argument("RsCode::encode: wrong chunk count");
  if (index < 1 || index > n_) throw std::out_of_range("RsCode::encode: index out of range");
  if (index <= l_) return chunks[static_cast<std::size_t>(index - 1)];
  return RsEncoder(*this, chunks).packet(index);
}

std::optional<std::vector<Bytes>> RsCode::decode(
    const std::vector<std::pair<int, Bytes>>& packets) const {
  std::map<int, const Bytes*> distinct;
  for (const auto& [idx, data] : packets) {
    if (idx < 1 || idx > n_) throw std::out_of_range("RsCode::decode: index out of range");
    distinct.emplace(idx, &data);
  }
  if (static_cast<int>(distinct.size()) < l_) return std::nullopt;

  std::vector<uint8_t> xs;
  std::vector<const Bytes*> ys;
  for (const auto& [idx, data] : distinct) {
    xs.push_back(static_cast<uint8_t>(idx - 1));
    ys.push_back(data);
    if (static_cast<int>(xs.size()) == l_) break;
  }
  const std::size_t width = ys.front()->size();
  for (const Bytes* y : ys)
    if (y->size() != width) throw std::invalid_argument("RsCode::decode: ragged packets");

  // alpha[t][i]: Lagrange weight of sample i when evaluating at x = t.
  // When t coincides with a sample point the weights collapse to a unit row.
  std::vector<std::vector<uint8_t>> alpha(
      static_cast<std::size_t>(l_), std::vector<uint8_t>(static_cast<std::size_t>(l_), 0));
  for (int t = 0; t < l_; ++t) {
    const uint8_t xt = static_cast<uint8_t>(t);
    for (int i = 0; i < l_; ++i) {
      uint8_t num = 1, den = 1;
      for (int k = 0; k < l_; ++k) {
        if (k == i) continue;
        num = mul(num, static_cast<uint8_t>(xt ^ xs[static_cast<std::size_t>(k)]));
        den = mul(den,
                  static_cast<uint8_t>(xs[static_cast<std::size_t>(i)] ^ xs[static_cast<std::size_t>(k)]));
      }
      alpha[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] = mul(num, inv(den));
    }
  }

  std::vector<Bytes> chunks(static_cast<std::size_t>(l_), Bytes(width, 0));
  for (int t = 0; t < l_; ++t) {
    for (int i = 0; i < l_; ++i) {
      const uint8_t a = alpha[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
      if (!a) continue;
      const Bytes& y = *ys[static_cast<std::size_t>(i)];
      Bytes& out = chunks[static_cast<std::size_t>(t)];
      for (std::size_t j = 0; j < width; ++j) out[j] ^= mul(a, y[j]);
    }
  }
  return chunks;
}

RsEncoder::RsEncoder(const RsCode& code, std::vector<Bytes> chunks)
    : code_(&code), chunks_(std::move(chunks)) {
  if (static_cast<int>(chunks_.size()) != code.l())
    throw std::invalid_argument("RsEncoder: wrong chunk count");
  const std::size_t width = chunks_.front().size();
  for (const Bytes& c : chunks_)
    if (c.size() != width) throw std::invalid_argument("RsEncoder: ragged chunks");
}

Bytes RsEncoder::packet(int index) const {
  if (index < 1 || index > code_->n())
    throw std::out_of_range("RsEncoder::packet: index out of range");
  if (index <= code_->l()) return chunks_[static_cast<std::size_t>(index - 1)];

  if (coeff_.empty()) {
    // coeff_[j] = sum_i chunk[i][j] * basis_i, built on first parity request.
    const std::size_t width = chunks_.front().size();
    coeff_.assign(width, Bytes(static_cast<std::size_t>(code_->l()), 0));
    for (int i = 0; i < code_->l(); ++i) {
      const Bytes& row = chunks_[static_cast<std::size_t>(i)];
      const auto& b = code_->basis(i);
      for (std::size_t j = 0; j < width; ++j) {
        const uint8_t y = row[j];
        if (!y) continue;
        Bytes& cj = coeff_[j];
        for (int d = 0; d < code_->l(); ++d)
          cj[static_cast<std::size_t>(d)] ^= mul(y, b[static_cast<std::size_t>(d)]);
      }
    }
  }

  const std::size_t width = chunks_.front().size();
  const uint8_t x = static_cast<uint8_t>(index - 1);
  Bytes out(width);
  for (std::size_t j = 0; j < width; ++j) {
    uint8_t acc = 0;
    const Bytes& cj = coeff_[j];
    for (std::size_t d = cj.size(); d-- > 0;) acc = static_cast<uint8_t>(mul(acc, x) ^ cj[d]);
    out[j] = acc;
  }
  return out;
}

Bits rs_encode_packet(const RsCode& code, const Bits& message, int k_bits, int index) {
  // Field symbols are bytes: a parity packet's last byte depends on all eight
  // bits of every chunk's last byte, so fractional-byte packets cannot carry
  // enough to stay invertible.
  if (k_bits < 8 || k_bits % 8 != 0)
    throw std::invalid_argument("rs_encode_packet: k_bits must be a positive multiple of 8");
  if (message.size() != static_cast<std::size_t>(code.l()) * static_cast<std::size_t>(k_bits))
    throw std::invalid_argument("rs_encode_packet: message size must be l * k_bits");
  std::vector<Bytes> chunks(static_cast<std::size_t>(code.l()));
  for (int i = 0; i < code.l(); ++i) {
    Bits chunk(message.begin() + static_cast<std::ptrdiff_t>(i) * k_bits,
               message.begin() + static_cast<std::ptrdiff_t>(i + 1) * k_bits);
    chunks[static_cast<std::size_t>(i)] = pack_bits(chunk);
  }
  return unpack_bits(code.encode(chunks, index), static_cast<std::size_t>(k_bits));
}

std::optional<Bits> rs_decode_message(const RsCode& code, int k_bits,
                                      const std::vector<std::pair<int, Bits>>& packets) {
  if (k_bits < 8 || k_bits % 8 != 0)
    throw std::invalid_argument("rs_decode_message: k_bits must be a positive multiple of 8");
  std::vector<std::pair<int, Bytes>> packed;
  packed.reserve(packets.size());
  for (const auto& [idx, bits] : packets) {
    if (bits.size() != static_cast<std::size_t>(k_bits))
      throw std::invalid_argument("rs_decode_message: packet size mismatch");
    packed.emplace_back(idx, pack_bits(bits));
  }
  auto chunks = code.decode(packed);
  if (!chunks) return std::nullopt;
  Bits message;
  message.reserve(static_cast<std::size_t>(code.l()) * static_cast<std::size_t>(k_bits));
  for (const Bytes& c : *chunks) {
    Bits bits = unpack_bits(c, static_cast<std::size_t>(k_bits));
    message.insert(message.end(), bits.begin(), bits.end());
  }
  return message;
}

}  // namespace ncma::mac
