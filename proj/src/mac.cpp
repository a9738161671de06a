#include "ncma/mac.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

#include "ncma/fec.hpp"

namespace ncma::mac {

MacState::MacState(const MacConfig& cfg) : cfg_(cfg) {
  codes_.reserve(3);
  for (int u = 0; u < 3; ++u) {
    if (cfg.l_pkts[u] < 1 || cfg.n_max[u] < cfg.l_pkts[u] || cfg.k_bits[u] < 8 ||
        cfg.k_bits[u] % 8 != 0 || cfg.pad_bits[u] < 0)
      throw std::invalid_argument("MacState: bad per-user sizes");
    codes_.emplace_back(cfg.l_pkts[u], cfg.n_max[u]);
  }
}

void MacState::start_message(int user, int64_t msg_id) {
  UserState& st = users_.at(static_cast<std::size_t>(user));
  st = UserState{};
  st.msg_id = msg_id;
}

void MacState::abandon_message(int user) {
  UserState& st = users_.at(static_cast<std::size_t>(user));
  const int64_t msg = st.msg_id;
  std::erase_if(store_, [&](const StoredEquation& eq) {
    return std::any_of(eq.coords.begin(), eq.coords.end(), [&](const PacketCoord& c) {
      return c.user == user && c.msg_id == msg;
    });
  });
  st = UserState{};
}

int MacState::recovered_count(int user) const {
  return static_cast<int>(users_.at(static_cast<std::size_t>(user)).got.size());
}

std::size_t MacState::stored_equations() const { return store_.size(); }

void MacState::add_packet(const PacketCoord& coord, const Bits& info_bits) {
  UserState& st = users_.at(static_cast<std::size_t>(coord.user));
  if (coord.msg_id != st.msg_id || st.decoded) return;  // stale or already done
  const int k = cfg_.k_bits[static_cast<std::size_t>(coord.user)];
  const int pad = cfg_.pad_bits[static_cast<std::size_t>(coord.user)];
  if (info_bits.size() != static_cast<std::size_t>(k + pad) + fec::kCrcBits)
    throw std::invalid_argument("MacState::add_packet: payload size mismatch");
  if (!fec::crc_check(info_bits)) {
    ++anomalies_;
    return;
  }
  // The pad field is constant zero on every packet, hence zero in any xor of
  // packets too; only the coded k bits are kept.
  Bits payload(info_bits.begin(), info_bits.begin() + k);
  auto [it, inserted] = st.got.emplace(coord.index, payload);
  if (!inserted && it->second != payload) ++anomalies_;
}

bool MacState::try_decode(int user) {
  UserState& st = users_.at(static_cast<std::size_t>(user));
  if (st.decoded) return false;
  const int l = cfg_.l_pkts[static_cast<std::size_t>(user)];
  if (static_cast<int>(st.got.size()) < l) return false;
  std::vector<std::pair<int, Bits>> pkts(st.got.begin(), st.got.end());
  auto data = rs_decode_message(codes_[static_cast<std::size_t>(user)],
                                cfg_.k_bits[static_cast<std::size_t>(user)], pkts);
  if (!data) return false;
  st.decoded = true;
  st.data = std::move(*data);
  std::vector<Bytes> chunks(static_cast<std::size_t>(l));
  const int k = cfg_.k_bits[static_cast<std::size_t>(user)];
  for (int i = 0; i < l; ++i) {
    Bits chunk(st.data.begin() + static_cast<std::ptrdiff_t>(i) * k,
               st.data.begin() + static_cast<std::ptrdiff_t>(i + 1) * k);
    chunks[static_cast<std::size_t>(i)] = pack_bits(chunk);
  }
  st.regen.emplace(codes_[static_cast<std::size_t>(user)], std::move(chunks));
  return true;
}

std::vector<std::pair<PacketCoord, Bits>> MacState::mac_bridge(int user_just_decoded,
                                                               std::vector<int>* decoded_users) {
  std::vector<std::pair<PacketCoord, Bits>> recovered;
  std::vector<int> queue{user_just_decoded};

  while (!queue.empty()) {
    const int u = queue.back();
    queue.pop_back();
    const UserState& st = users_.at(static_cast<std::size_t>(u));
    if (!st.decoded || !st.regen) continue;
    const int k = cfg_.k_bits[static_cast<std::size_t>(u)];

    // Substitute u's regenerated packets wherever the store references them.
    const int pad = cfg_.pad_bits[static_cast<std::size_t>(u)];
    std::set<int> touched_slots;
    for (StoredEquation& eq : store_) {
      for (std::size_t ci = 0; ci < eq.coords.size();) {
        const PacketCoord& c = eq.coords[ci];
        if (c.user == u && c.msg_id == st.msg_id) {
          Bits payload = unpack_bits(st.regen->packet(c.index), static_cast<std::size_t>(k));
          payload.insert(payload.end(), static_cast<std::size_t>(pad), 0);
          eq.payload = xor_bits(eq.payload, fec::crc_attach(payload).bits());
          eq.coords.erase(eq.coords.begin() + static_cast<std::ptrdiff_t>(ci));
          touched_slots.insert(eq.slot);
        } else {
          ++ci;
        }
      }
    }

    // Re-eliminate within each touched slot; coordinates never repeat across
    // slots, so slots reduce independently.
    for (int slot : touched_slots) {
      std::vector<StoredEquation*> eqs;
      for (StoredEquation& eq : store_)
        if (eq.slot == slot) eqs.push_back(&eq);

      std::vector<PacketCoord> unknowns;
      for (StoredEquation* eq : eqs)
        for (const PacketCoord& c : eq->coords)
          if (std::find(unknowns.begin(), unknowns.end(), c) == unknowns.end()) unknowns.push_back(c);

      struct Row {
        uint32_t mask = 0;
        Bits payload;
      };
      std::vector<Row> rows;
      std::vector<int> pivot(unknowns.size(), -1);
      std::vector<bool> dead(eqs.size(), false);
      for (std::size_t ei = 0; ei < eqs.size(); ++ei) {
        Row r;
        r.payload = eqs[ei]->payload;
        for (const PacketCoord& c : eqs[ei]->coords) {
          const auto pos = static_cast<std::size_t>(
              std::find(unknowns.begin(), unknowns.end(), c) - unknowns.begin());
          r.mask |= 1u << pos;
        }
        for (std::size_t uix = 0; uix < unknowns.size(); ++uix) {
          if (((r.mask >> uix) & 1u) && pivot[uix] >= 0) {
            r.mask ^= rows[static_cast<std::size_t>(pivot[uix])].mask;
            r.payload = xor_bits(r.payload, rows[static_cast<std::size_t>(pivot[uix])].payload);
          }
        }
        if (r.mask == 0) {
          if (std::any_of(r.payload.begin(), r.payload.end(), [](uint8_t b) { return b != 0; }))
            ++anomalies_;
          dead[ei] = true;
          rows.push_back(Row{});  // placeholder to keep indices aligned
          continue;
        }
        unsigned piv = 0;
        while (!((r.mask >> piv) & 1u)) ++piv;
        pivot[piv] = static_cast<int>(rows.size());
        rows.push_back(std::move(r));
      }
      // Back-substitution to expose every derivable unit row.
      for (std::size_t uix = unknowns.size(); uix-- > 0;) {
        if (pivot[uix] < 0) continue;
        const Row src = rows[static_cast<std::size_t>(pivot[uix])];
        for (std::size_t ri = 0; ri < rows.size(); ++ri) {
          if (static_cast<int>(ri) == pivot[uix] || rows[ri].mask == 0) continue;
          if ((rows[ri].mask >> uix) & 1u) {
            rows[ri].mask ^= src.mask;
            rows[ri].payload = xor_bits(rows[ri].payload, src.payload);
          }
        }
      }

      // Write back: unit rows become natives, the rest stay stored.
      std::vector<StoredEquation> keep;
      for (std::size_t uix = 0; uix < unknowns.size(); ++uix) {
        if (pivot[uix] < 0) continue;
        Row& r = rows[static_cast<std::size_t>(pivot[uix])];
        if (std::popcount(r.mask) == 1) {
          const PacketCoord& c = unknowns[uix];
          recovered.emplace_back(c, r.payload);
          add_packet(c, r.payload);
        } else {
          StoredEquation eq;
          eq.slot = slot;
          eq.payload = std::move(r.payload);
          for (std::size_t w = 0; w < unknowns.size(); ++w)
            if ((r.mask >> w) & 1u) eq.coords.push_back(unknowns[w]);
          keep.push_back(std::move(eq));
        }
      }
      std::erase_if(store_, [&](const StoredEquation& eq) { return eq.slot == slot; });
      store_.insert(store_.end(), keep.begin(), keep.end());
    }

    // Chase decodes enabled by the new packets.
    for (int v = 0; v < 3; ++v) {
      if (try_decode(v)) {
        if (decoded_users) decoded_users->push_back(v);
        queue.push_back(v);
      }
    }
  }
  return recovered;
}

std::vector<int> MacState::add_slot(int slot,
                                    const std::vector<std::pair<PacketCoord, Bits>>& natives,
                                    const std::vector<StoredEquation>& unresolved,
                                    bool enable_bridging) {
  std::vector<int> decoded;
  for (const auto& [coord, payload] : natives) add_packet(coord, payload);
  if (enable_bridging) {
    for (const StoredEquation& eq : unresolved) {
      if (eq.coords.empty()) continue;
      store_.push_back(eq);
      store_.back().slot = slot;
    }
  }
  for (int u = 0; u < 3; ++u) {
    if (try_decode(u)) {
      decoded.push_back(u);
      if (enable_bridging) mac_bridge(u, &decoded);
    }
  }
  return decoded;
}

}  // namespace ncma::mac
