#pragma once

#include <compare>
#include <map>
#include <optional>

#include "ncma/common.hpp"
#include "ncma/rs.hpp"

namespace ncma::mac {

// Identity of one transmitted packet. For a split-QPSK user the I and Q
// half-packets of slot t carry indices 2t-1 and 2t of the same message.
struct PacketCoord {
  int user = 0;
  int64_t msg_id = 0;
  int index = 0;
  auto operator<=>(const PacketCoord&) const = default;
};

// A PNC leftover awaiting later resolution: XOR of the named packets'
// payload+CRC bits.
struct StoredEquation {
  int slot = 0;
  std::vector<PacketCoord> coords;
  Bits payload;
};

struct MacConfig {
  std::array<int, 3> l_pkts{};    // packets per message, per user
  std::array<int, 3> n_max{};     // abandon after this many transmitted packets
  std::array<int, 3> k_bits{};    // erasure-coded payload bits per packet (multiple of 8)
  // Constant zero filler between the coded payload and the CRC, used when the
  // airtime budget is not a whole number of bytes. Covered by the CRC.
  std::array<int, 3> pad_bits{0, 0, 0};
};

// Receiver-side bookkeeping: per-user recovery of the current message plus
// the store of unresolved cross-user equations.
class MacState {
 public:
  explicit MacState(const MacConfig& cfg);

  void start_message(int user, int64_t msg_id);
  // Drops the current message and every stored equation that references it.
  void abandon_message(int user);

  // Feed one slot: natives are CRC-validated (coord, payload+crc) pairs;
  // unresolved equations are stored only when bridging is enabled. Returns
  // the users whose current message was decoded during this call, including
  // decodes cascaded through the equation store.
  std::vector<int> add_slot(int slot, const std::vector<std::pair<PacketCoord, Bits>>& natives,
                            const std::vector<StoredEquation>& unresolved, bool enable_bridging);

  // Substitute a decoded user's regenerated packets into the store,
  // re-eliminate slot by slot, and chase recoveries to a fixed point.
  // Returns every packet recovered this way.
  std::vector<std::pair<PacketCoord, Bits>> mac_bridge(int user_just_decoded,
                                                       std::vector<int>* decoded_users = nullptr);

  bool message_decoded(int user) const { return users_.at(static_cast<std::size_t>(user)).decoded; }
  const Bits& decoded_data(int user) const { return users_.at(static_cast<std::size_t>(user)).data; }
  int64_t current_msg(int user) const { return users_.at(static_cast<std::size_t>(user)).msg_id; }
  int recovered_count(int user) const;
  std::size_t stored_equations() const;
  int anomalies() const { return anomalies_; }

 private:
  struct UserState {
    int64_t msg_id = -1;
    std::map<int, Bits> got;  // packet index -> payload (no CRC)
    bool decoded = false;
    Bits data;
    std::optional<RsEncoder> regen;
  };

  void add_packet(const PacketCoord& coord, const Bits& info_bits);
  bool try_decode(int user);
  void drain_decodes(std::vector<int>& decoded, bool enable_bridging);

  MacConfig cfg_;
  std::vector<RsCode> codes_;
  std::array<UserState, 3> users_;
  std::vector<StoredEquation> store_;
  std::vector<int> pending_;  // users with enough packets, awaiting rs decode
  int anomalies_ = 0;
};

}  // namespace ncma::mac
