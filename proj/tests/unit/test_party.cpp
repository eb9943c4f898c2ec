#include <doctest.h>

#include <set>
#include <stdexcept>

#include "qss/party.hpp"
#include "qss/rng.hpp"

using qss::Gate;
using qss::PartySecret;
using qss::QubitState;
using qss::StateLabel;

TEST_CASE("party names round trip") {
  CHECK(qss::to_string(qss::alice(1)) == "alice_1");
  CHECK(qss::to_string(qss::bob(3)) == "bob_3");
  CHECK(qss::parse_party("alice_2") == qss::alice(2));
  CHECK(qss::parse_party("bob_1") == qss::bob(1));
  CHECK_THROWS_AS(qss::parse_party("carol_1"), std::invalid_argument);
  CHECK_THROWS_AS(qss::parse_party("alice_"), std::invalid_argument);
  CHECK_THROWS_AS(qss::parse_party("alice_0"), std::invalid_argument);
  CHECK_THROWS_AS(qss::parse_party("alice_2x"), std::invalid_argument);
  CHECK_THROWS_AS(qss::parse_party(""), std::invalid_argument);
}

TEST_CASE("secret generation draws every operation before any basis bit") {
  qss::Rng used(99);
  qss::Rng twin(99);
  const PartySecret secret = qss::generate_secret(qss::alice(2), 16, used);
  for (int i = 0; i < 16; ++i)
    CHECK(secret.op_string[i] == twin.uniform_below(4));
  for (int i = 0; i < 16; ++i)
    CHECK(secret.had_string[i] == twin.uniform_below(2));
}

TEST_CASE("the first sender draws from the binary alphabet, everyone else from four symbols") {
  qss::Rng rng(4);
  const PartySecret a1 = qss::generate_secret(qss::alice(1), 512, rng);
  std::set<int> a1_ops, a1_hads;
  for (const auto op : a1.op_string) a1_ops.insert(op);
  for (const auto had : a1.had_string) a1_hads.insert(had);
  CHECK(a1_ops == std::set<int>{0, 1});
  CHECK(a1_hads == std::set<int>{0, 1});

  const PartySecret b1 = qss::generate_secret(qss::bob(1), 512, rng);
  std::set<int> b1_ops;
  for (const auto op : b1.op_string) b1_ops.insert(op);
  CHECK(b1_ops == std::set<int>{0, 1, 2, 3});
}

TEST_CASE("initial preparation requires the first sender") {
  qss::Rng rng(1);
  const PartySecret not_first = qss::generate_secret(qss::alice(2), 4, rng);
  CHECK_THROWS_AS(qss::initial_prepare(not_first), std::invalid_argument);

  const PartySecret first = qss::generate_secret(qss::alice(1), 4, rng);
  const auto labels = qss::initial_prepare(first);
  REQUIRE(labels.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(labels[i].value_bit == first.op_string[i]);
    CHECK(labels[i].basis_bit == first.had_string[i]);
  }
}

TEST_CASE("encoding applies the operation gate and then the basis gate") {
  for (int value = 0; value < 2; ++value)
    for (int basis = 0; basis < 2; ++basis)
      for (int op = 0; op < 4; ++op)
        for (int had = 0; had < 2; ++had) {
          const StateLabel in{static_cast<std::uint8_t>(value),
                              static_cast<std::uint8_t>(basis)};
          QubitState direct = qss::apply_gate(qss::prepare(in),
                                              qss::sigma_gate(op));
          if (had) direct = qss::apply_gate(direct, Gate::Hadamard);
          const QubitState encoded = qss::encode_qubit(
              qss::prepare(in), static_cast<std::uint8_t>(op),
              static_cast<std::uint8_t>(had));
          CHECK(encoded == direct);
          // the label shift commutes with the state-vector path
          const StateLabel shifted = qss::label_shift(
              in, static_cast<std::uint8_t>(op), static_cast<std::uint8_t>(had));
          CHECK(qss::equal_up_to_phase(encoded, qss::prepare(shifted)));
        }
}

TEST_CASE("label_unshift inverts label_shift for every combination") {
  for (int value = 0; value < 2; ++value)
    for (int basis = 0; basis < 2; ++basis)
      for (int op = 0; op < 4; ++op)
        for (int had = 0; had < 2; ++had) {
          const StateLabel in{static_cast<std::uint8_t>(value),
                              static_cast<std::uint8_t>(basis)};
          const StateLabel shifted = qss::label_shift(
              in, static_cast<std::uint8_t>(op), static_cast<std::uint8_t>(had));
          CHECK(qss::label_unshift(shifted, static_cast<std::uint8_t>(op),
                                   static_cast<std::uint8_t>(had)) == in);
        }
}

TEST_CASE("block encoding matches per-qubit encoding") {
  qss::Rng rng(12);
  const PartySecret first = qss::generate_secret(qss::alice(1), 32, rng);
  const PartySecret second = qss::generate_secret(qss::alice(2), 32, rng);
  std::vector<QubitState> block;
  for (const auto& label : qss::initial_prepare(first))
    block.push_back(qss::prepare(label));
  const auto encoded = qss::encode_block(block, second);
  REQUIRE(encoded.size() == block.size());
  for (std::size_t i = 0; i < block.size(); ++i)
    CHECK(encoded[i] == qss::encode_qubit(block[i], second.op_string[i],
                                          second.had_string[i]));
}

TEST_CASE("announcements reveal exactly the requested positions") {
  qss::Rng rng(8);
  const PartySecret secret = qss::generate_secret(qss::bob(1), 8, rng);
  const std::vector<std::size_t> positions{1, 4, 6};
  const qss::Announcement ann = qss::make_announcement(secret, positions);
  CHECK(ann.party == secret.party);
  REQUIRE(ann.positions == positions);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    CHECK(ann.revealed_ops[i] == secret.op_string[positions[i]]);
    CHECK(ann.revealed_had[i] == secret.had_string[positions[i]]);
  }
  CHECK_THROWS_AS(qss::make_announcement(secret, {8}), std::out_of_range);
}
