#include "qss/party.hpp"

#include <charconv>
#include <stdexcept>

namespace qss {

std::string to_string(PartyId id) {
  const char* prefix = id.group == Group::Alices ? "alice_" : "bob_";
  return prefix + std::to_string(id.index);
}

PartyId parse_party(std::string_view text) {
  Group group;
  std::string_view rest;
  if (text.starts_with("alice_")) {
    group = Group::Alices;
    rest = text.substr(6);
  } else if (text.starts_with("bob_")) {
    group = Group::Bobs;
    rest = text.substr(4);
  } else {
    throw std::invalid_argument("party id must look like alice_<k> or bob_<k>, got '" +
                                std::string(text) + "'");
  }
  int index = 0;
  const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), index);
  if (ec != std::errc{} || ptr != rest.data() + rest.size() || index < 1)
    throw std::invalid_argument("party index must be a positive integer, got '" +
                                std::string(text) + "'");
  return PartyId{group, index};
}

PartySecret generate_secret(PartyId party, std::size_t block_size, Rng& rng) {
  if (party.index < 1) throw std::invalid_argument("party index must be >= 1");
  if (block_size == 0) throw std::invalid_argument("block size must be >= 1");
  const std::uint32_t op_radix = is_alice_one(party) ? 2 : 4;
  PartySecret secret;
  secret.party = party;
  secret.op_string.reserve(block_size);
  secret.had_string.reserve(block_size);
  for (std::size_t k = 0; k < block_size; ++k)
    secret.op_string.push_back(static_cast<std::uint8_t>(rng.uniform_below(op_radix)));
  for (std::size_t k = 0; k < block_size; ++k)
    secret.had_string.push_back(static_cast<std::uint8_t>(rng.uniform_below(2)));
  return secret;
}

std::vector<StateLabel> initial_prepare(const PartySecret& secret) {
  if (!is_alice_one(secret.party))
    throw std::invalid_argument("only the first sender prepares fresh states");
  if (secret.op_string.size() != secret.had_string.size())
    throw std::invalid_argument("secret strings must have equal length");
  std::vector<StateLabel> labels;
  labels.reserve(secret.op_string.size());
  for (std::size_t k = 0; k < secret.op_string.size(); ++k)
    labels.push_back(StateLabel{secret.op_string[k], secret.had_string[k]});
  return labels;
}

QubitState encode_qubit(const QubitState& state, int op_symbol, int had_bit) {
  if (had_bit != 0 && had_bit != 1)
    throw std::invalid_argument("had bit must be 0 or 1");
  QubitState out = apply_gate(state, sigma_gate(op_symbol));
  if (had_bit) out = apply_gate(out, Gate::Hadamard);
  return out;
}

std::vector<QubitState> encode_block(const std::vector<QubitState>& states,
                                     const PartySecret& secret) {
  if (states.size() != secret.op_string.size() ||
      states.size() != secret.had_string.size())
    throw std::invalid_argument("block length does not match secret length");
  std::vector<QubitState> out;
  out.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k)
    out.push_back(encode_qubit(states[k], secret.op_string[k], secret.had_string[k]));
  return out;
}

StateLabel label_shift(StateLabel label, int op_symbol, int had_bit) {
  if (had_bit != 0 && had_bit != 1)
    throw std::invalid_argument("had bit must be 0 or 1");
  StateLabel out = apply_label(label, sigma_gate(op_symbol));
  if (had_bit) out = apply_label(out, Gate::Hadamard);
  return out;
}

StateLabel label_unshift(StateLabel label, int op_symbol, int had_bit) {
  if (had_bit != 0 && had_bit != 1)
    throw std::invalid_argument("had bit must be 0 or 1");
  // Hadamard is self-inverse on labels, and each sigma flips the value
  // conditioned only on the basis bit, which it never changes; so the
  // sigma label action is its own inverse once the basis is restored.
  StateLabel mid = had_bit ? apply_label(label, Gate::Hadamard) : label;
  return apply_label(mid, sigma_gate(op_symbol));
}

Announcement make_announcement(const PartySecret& secret,
                               std::vector<std::size_t> positions) {
  Announcement ann;
  ann.party = secret.party;
  ann.positions = std::move(positions);
  ann.revealed_ops.reserve(ann.positions.size());
  ann.revealed_had.reserve(ann.positions.size());
  for (std::size_t pos : ann.positions) {
    if (pos >= secret.op_string.size())
      throw std::out_of_range("announcement position outside the block");
    ann.revealed_ops.push_back(secret.op_string[pos]);
    ann.revealed_had.push_back(secret.had_string[pos]);
  }
  return ann;
}

}  // namespace qss
