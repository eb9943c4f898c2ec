#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qss/qubit.hpp"
#include "qss/rng.hpp"

namespace qss {

enum class Group : std::uint8_t { Alices = 0, Bobs = 1 };

// One protocol participant, identified by group and 1-based index.
struct PartyId {
  Group group = Group::Alices;
  int index = 1;
  friend bool operator==(const PartyId&, const PartyId&) = default;
};

inline PartyId alice(int index) { return PartyId{Group::Alices, index}; }
inline PartyId bob(int index) { return PartyId{Group::Bobs, index}; }
inline bool is_alice_one(PartyId id) {
  return id.group == Group::Alices && id.index == 1;
}

std::string to_string(PartyId id);            // "alice_2", "bob_1"
PartyId parse_party(std::string_view text);   // inverse of to_string

// A party's private strings for one block. The first sender's op_string is
// binary (the value bits of the states she prepares); every later party's
// op_string is quaternary (sigma selector). had_string is binary for
// everyone and decides whether a Hadamard follows the sigma.
struct PartySecret {
  PartyId party;
  std::vector<std::uint8_t> op_string;
  std::vector<std::uint8_t> had_string;
  friend bool operator==(const PartySecret&, const PartySecret&) = default;
};

PartySecret generate_secret(PartyId party, std::size_t block_size, Rng& rng);

// First sender only: her strings name the four preparation states directly.
std::vector<StateLabel> initial_prepare(const PartySecret& secret);

// One cascade step: sigma first, then the optional Hadamard.
QubitState encode_qubit(const QubitState& state, int op_symbol, int had_bit);
std::vector<QubitState> encode_block(const std::vector<QubitState>& states,
                                     const PartySecret& secret);

// The same step on the symbolic side, and its inverse. label_unshift undoes
// label_shift for every (op, had) pair; the receiving side uses it to walk
// measurement results back to the labels the last sender emitted.
StateLabel label_shift(StateLabel label, int op_symbol, int had_bit);
StateLabel label_unshift(StateLabel label, int op_symbol, int had_bit);

// Public reveal of one party's symbols at selected block positions.
struct Announcement {
  PartyId party;
  std::vector<std::size_t> positions;
  std::vector<std::uint8_t> revealed_ops;
  std::vector<std::uint8_t> revealed_had;
  friend bool operator==(const Announcement&, const Announcement&) = default;
};

Announcement make_announcement(const PartySecret& secret,
                               std::vector<std::size_t> positions);

}  // namespace qss
