#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qss/protocol.hpp"

using qss::AttackKind;
using qss::AttackStrategy;
using qss::CheckStage;
using qss::MeasuredQubit;
using qss::ProtocolConfig;
using qss::ProtocolOutcome;
using qss::Verdict;

namespace {

ProtocolConfig honest_config(std::uint64_t seed) {
  ProtocolConfig config;
  config.alices = 2;
  config.bobs = 2;
  config.block_size = 128;
  config.sample_fraction = 0.25;
  config.error_threshold = 0.11;
  config.seed = seed;
  return config;
}

const MeasuredQubit& measured_at(const qss::RunRecord& record,
                                 std::size_t origin) {
  for (const auto& q : record.measured)
    if (q.origin == origin) return q;
  throw std::out_of_range("origin was not measured");
}

}  // namespace

TEST_CASE("configuration validation names the offending field") {
  const ProtocolConfig base = honest_config(0);
  auto expect_reject = [](ProtocolConfig config, const char* field) {
    CAPTURE(field);
    CHECK_THROWS_AS(qss::validate_config(config), std::invalid_argument);
  };

  qss::validate_config(base);

  ProtocolConfig c = base;
  c.alices = 1;
  expect_reject(c, "alices");
  c = base;
  c.bobs = 0;
  expect_reject(c, "bobs");
  c = base;
  c.block_size = 0;
  expect_reject(c, "block_size");
  c = base;
  c.sample_fraction = 1.0;
  expect_reject(c, "sample_fraction high");
  c = base;
  c.sample_fraction = -0.01;
  expect_reject(c, "sample_fraction low");
  c = base;
  c.error_threshold = 1.0;
  expect_reject(c, "error_threshold");
  c = base;
  c.attack_plan.assign(2, AttackStrategy{});
  expect_reject(c, "attack_plan size");
  c = base;
  c.attack_plan.assign(3, AttackStrategy{});
  c.attack_plan[0].coverage = 1.5;
  expect_reject(c, "coverage");
  c = base;
  c.block_size = 4;  // 0.25 sampling eats all four positions
  expect_reject(c, "sampling consumes the block");
}

TEST_CASE("pipeline geometry") {
  ProtocolConfig config = honest_config(0);
  config.alices = 3;
  config.bobs = 2;
  CHECK(qss::segment_count(config) == 4);
  CHECK(qss::pipeline_party(config, 0) == qss::alice(1));
  CHECK(qss::pipeline_party(config, 2) == qss::alice(3));
  CHECK(qss::pipeline_party(config, 3) == qss::bob(1));
  CHECK(qss::pipeline_party(config, 4) == qss::bob(2));
  CHECK_THROWS_AS(qss::pipeline_party(config, 5), std::out_of_range);
  CHECK_THROWS_AS(qss::attack_for_segment(config, 4), std::out_of_range);
  CHECK(qss::attack_for_segment(config, 1).kind == AttackKind::None);
}

TEST_CASE("sampling arithmetic is pinned") {
  CHECK(qss::sample_count(0.25, 128) == 32);
  CHECK(qss::sample_count(0.25, 3) == 1);  // ceil
  CHECK(qss::sample_count(0.0, 128) == 0);
  CHECK(qss::sample_count(0.5, 0) == 0);

  // 128 -> 96 -> 72 -> 54 -> 40 over the four checks of a 2+2 run
  CHECK(qss::predicted_key_length(honest_config(0)) == 40);

  ProtocolConfig zero = honest_config(0);
  zero.block_size = 4;
  zero.sample_fraction = 0.0;
  CHECK(qss::predicted_key_length(zero) == 4);
  qss::validate_config(zero);
}

TEST_CASE("label composition walks the encoder chain") {
  qss::Rng rng(3);
  std::vector<qss::PartySecret> encoders;
  encoders.push_back(qss::generate_secret(qss::alice(1), 6, rng));
  encoders.push_back(qss::generate_secret(qss::alice(2), 6, rng));
  encoders.push_back(qss::generate_secret(qss::bob(1), 6, rng));
  for (std::size_t pos = 0; pos < 6; ++pos) {
    qss::StateLabel expected{encoders[0].op_string[pos],
                             encoders[0].had_string[pos]};
    for (std::size_t i = 1; i < encoders.size(); ++i)
      expected = qss::label_shift(expected, encoders[i].op_string[pos],
                                  encoders[i].had_string[pos]);
    CHECK(qss::compose_label(pos, encoders) == expected);
  }
  CHECK_THROWS_AS(qss::compose_label(6, encoders), std::out_of_range);
  std::vector<qss::PartySecret> headless(encoders.begin() + 1, encoders.end());
  CHECK_THROWS_AS(qss::compose_label(0, headless), std::invalid_argument);
}

TEST_CASE("an honest run accepts with clean checks and the predicted key") {
  const ProtocolConfig config = honest_config(12345);
  const ProtocolOutcome out = qss::run_protocol(config);

  CHECK(out.verdict == Verdict::Accept);
  CHECK_FALSE(out.abort_party.has_value());
  CHECK(out.abort_reason.empty());
  REQUIRE(out.checks.size() == 4);

  CHECK(out.checks[0].party == qss::alice(2));
  CHECK(out.checks[0].stage == CheckStage::Receive);
  CHECK(out.checks[0].sample_count == 32);
  CHECK(out.checks[1].party == qss::bob(1));
  CHECK(out.checks[1].sample_count == 24);
  CHECK(out.checks[2].party == qss::bob(2));
  CHECK(out.checks[2].stage == CheckStage::FinalSample);
  CHECK(out.checks[2].sample_count == 18);
  CHECK(out.checks[2].usable == 18);  // announced first, so every sample counts
  CHECK(out.checks[3].party == qss::bob(2));
  CHECK(out.checks[3].stage == CheckStage::Group);
  CHECK(out.checks[3].sample_count == 14);
  for (const auto& check : out.checks) {
    CHECK(check.errors == 0);
    CHECK(check.error_rate == 0.0);
    CHECK(check.proceed);
    CHECK_FALSE(check.multi_photon_detected);
    CHECK_FALSE(check.lost_signal);
  }

  CHECK(out.key_positions.size() == 40);
  CHECK(out.final_key.size() == 40);
  CHECK(out.key_agreement);
  CHECK(out.alice_key == out.bob_key);
  CHECK(out.final_key == out.alice_key);

  REQUIRE(out.record.encoders.size() == 3);
  CHECK(out.record.measured.size() == 54);
  CHECK(out.record.key_positions == out.key_positions);
}

TEST_CASE("reconciled bases equal the parity of the hadamard bits") {
  ProtocolConfig config = honest_config(777);
  config.alices = 3;
  config.bobs = 2;
  const ProtocolOutcome out = qss::run_protocol(config);
  REQUIRE(out.verdict == Verdict::Accept);
  for (const auto& q : out.record.measured) {
    int parity = 0;
    for (const auto& enc : out.record.encoders)
      parity ^= enc.had_string[q.origin];
    CHECK(q.basis == (parity ? qss::Basis::X : qss::Basis::Z));
    // honest runs are deterministic position by position
    const qss::StateLabel label = qss::compose_label(q.origin, out.record.encoders);
    CHECK(q.outcome == label.value_bit);
  }
}

TEST_CASE("runs are reproducible and seed-sensitive") {
  ProtocolConfig config = honest_config(42);
  config.record_transcript = true;
  const ProtocolOutcome a = qss::run_protocol(config);
  const ProtocolOutcome b = qss::run_protocol(config);
  CHECK(a.transcript.text() == b.transcript.text());
  CHECK(a.checks == b.checks);
  CHECK(a.key_positions == b.key_positions);
  CHECK(a.final_key == b.final_key);

  config.seed = 43;
  const ProtocolOutcome c = qss::run_protocol(config);
  CHECK(a.transcript.text() != c.transcript.text());
}

TEST_CASE("a replayed transcript matches byte for byte") {
  ProtocolConfig config = honest_config(9001);
  config.record_transcript = true;
  const ProtocolOutcome out = qss::run_protocol(config);
  const std::string text = out.transcript.text();

  const qss::ReplayResult replay = qss::replay_transcript(text);
  CHECK(replay.identical);
  CHECK(replay.logged_lines == out.transcript.lines().size());
  CHECK(replay.replayed_lines == replay.logged_lines);
  CHECK_FALSE(replay.first_divergence.has_value());
}

TEST_CASE("replay flags a tampered or truncated transcript") {
  ProtocolConfig config = honest_config(9002);
  config.record_transcript = true;
  const ProtocolOutcome out = qss::run_protocol(config);
  const auto& lines = out.transcript.lines();
  REQUIRE(lines.size() > 3);

  std::string tampered;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    tampered += i == 2 ? std::string("{\"event\":\"doctored\"}") : lines[i];
    tampered += '\n';
  }
  const qss::ReplayResult bad = qss::replay_transcript(tampered);
  CHECK_FALSE(bad.identical);
  REQUIRE(bad.first_divergence.has_value());
  CHECK(*bad.first_divergence == 2);

  std::string truncated;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    truncated += lines[i];
    truncated += '\n';
  }
  const qss::ReplayResult cut = qss::replay_transcript(truncated);
  CHECK_FALSE(cut.identical);
  CHECK(cut.logged_lines == lines.size() - 1);
  CHECK(cut.replayed_lines == lines.size());
  REQUIRE(cut.first_divergence.has_value());
  CHECK(*cut.first_divergence == lines.size() - 1);

  CHECK_THROWS_AS(qss::replay_transcript(""), std::invalid_argument);
  CHECK_THROWS_AS(qss::replay_transcript("{\"event\":\"filter\"}\n"),
                  std::invalid_argument);
}

TEST_CASE("a zero-tolerance receiver aborts under a conjugate intercept") {
  ProtocolConfig config = honest_config(2026);
  config.block_size = 512;
  config.error_threshold = 0.0;
  config.attack_plan.assign(3, AttackStrategy{});
  config.attack_plan[0] = AttackStrategy{AttackKind::InterceptResendRandom, 1.0};
  const ProtocolOutcome out = qss::run_protocol(config);
  CHECK(out.verdict == Verdict::AbortAtHop);
  REQUIRE(out.abort_party.has_value());
  CHECK(*out.abort_party == qss::alice(2));
  CHECK(out.checks.back().stage == CheckStage::Receive);
  CHECK_FALSE(out.checks.back().proceed);
  CHECK(out.checks.back().errors > 0);
  CHECK_FALSE(out.abort_reason.empty());
  CHECK(out.key_positions.empty());
  CHECK(out.final_key.empty());
}

TEST_CASE("an attack on the last segment aborts at the measuring receiver") {
  ProtocolConfig config = honest_config(31337);
  config.block_size = 512;
  config.error_threshold = 0.0;
  config.attack_plan.assign(3, AttackStrategy{});
  config.attack_plan[2] = AttackStrategy{AttackKind::InterceptResendRandom, 1.0};
  const ProtocolOutcome out = qss::run_protocol(config);
  CHECK(out.verdict == Verdict::AbortAtHop);
  REQUIRE(out.abort_party.has_value());
  CHECK(*out.abort_party == qss::bob(2));
  CHECK(out.checks.back().stage == CheckStage::FinalSample);
}

TEST_CASE("a lucky eavesdropper is still caught by the group comparison") {
  // A low-coverage probe can slip past every threshold-zero sample check and
  // only show up when the measured key positions are compared. Hunt for a
  // seed where that happens; the hunt itself is deterministic.
  ProtocolConfig config = honest_config(0);
  config.block_size = 64;
  config.error_threshold = 0.0;
  config.attack_plan.assign(3, AttackStrategy{});
  config.attack_plan[1] = AttackStrategy{AttackKind::EntanglingProbe, 0.02};

  bool found = false;
  for (std::uint64_t seed = 0; seed < 5000 && !found; ++seed) {
    config.seed = seed;
    const ProtocolOutcome out = qss::run_protocol(config);
    if (out.verdict != Verdict::AbortFinalCheck) continue;
    found = true;
    REQUIRE(out.abort_party.has_value());
    CHECK(*out.abort_party == qss::bob(2));
    CHECK(out.checks.back().stage == CheckStage::Group);
    CHECK(out.checks.back().errors > 0);
    CHECK(out.key_positions.empty());
  }
  CHECK(found);
}

TEST_CASE("key reconstruction matches the run outcome on both sides") {
  const ProtocolOutcome out = qss::run_protocol(honest_config(555));
  REQUIRE(out.verdict == Verdict::Accept);
  const auto& enc = out.record.encoders;
  const std::span<const qss::PartySecret> alices(enc.data(), 2);
  const std::span<const qss::PartySecret> bobs(enc.data() + 2, 1);

  CHECK(qss::reconstruct_alice_key(alices, out.key_positions) == out.alice_key);
  CHECK(qss::reconstruct_bob_key(out.record.measured, bobs, out.key_positions) ==
        out.bob_key);
  // the sending group's chain must start at the preparer
  CHECK_THROWS_AS(qss::reconstruct_alice_key(bobs, out.key_positions),
                  std::invalid_argument);
}

TEST_CASE("a tolerated intercept shows the conjugate error signature") {
  ProtocolConfig config = honest_config(7);
  config.block_size = 4096;
  config.error_threshold = 0.99;
  config.attack_plan.assign(3, AttackStrategy{});
  config.attack_plan[0] = AttackStrategy{AttackKind::InterceptResendRandom, 1.0};
  const ProtocolOutcome out = qss::run_protocol(config);
  REQUIRE(out.verdict == Verdict::Accept);

  // every check on or after the attacked segment sees ~1/4 errors
  for (const auto& check : out.checks) {
    REQUIRE(check.usable > 100);
    const double n = static_cast<double>(check.usable);
    const double sigma = std::sqrt(0.25 * 0.75 / n);
    CHECK(std::abs(check.error_rate - 0.25) < 3.0 * sigma);
  }
  // and the surviving "key" no longer agrees across the groups
  CHECK_FALSE(out.key_agreement);
}

TEST_CASE("zero sampling keeps the whole block as key") {
  ProtocolConfig config = honest_config(99);
  config.block_size = 4;
  config.sample_fraction = 0.0;
  const ProtocolOutcome out = qss::run_protocol(config);
  CHECK(out.verdict == Verdict::Accept);
  for (const auto& check : out.checks) {
    CHECK(check.sample_count == 0);
    CHECK(check.proceed);
  }
  CHECK(out.key_positions.size() == 4);
  CHECK(out.key_agreement);
}

TEST_CASE("configurations round trip through json") {
  ProtocolConfig config = honest_config(17);
  config.alices = 2;
  config.bobs = 3;
  config.pns_mode = qss::PnsMode::Gt2;
  config.pns_idealized = false;
  config.attack_plan.assign(4, AttackStrategy{});
  config.attack_plan[1] = AttackStrategy{AttackKind::InterceptResendZ, 0.5};
  config.attack_plan[3] = AttackStrategy{AttackKind::MultiPhotonTrojan, 1.0};

  const nlohmann::ordered_json j = qss::config_to_json(config);
  CHECK(j.at("attacks").size() == 2);  // honest segments are not serialized
  const ProtocolConfig back = qss::config_from_json(j);
  CHECK(back == config);

  nlohmann::json bad = j;
  bad["surprise"] = 1;
  CHECK_THROWS_AS(qss::config_from_json(bad), std::invalid_argument);

  nlohmann::json wrong_party = j;
  wrong_party["attacks"][0]["after"] = "bob_3";  // the last receiver never sends
  CHECK_THROWS_AS(qss::config_from_json(wrong_party), std::invalid_argument);
}

TEST_CASE("multi-photon injection trips the sampled photon check") {
  ProtocolConfig config = honest_config(4);
  config.block_size = 256;
  config.attack_plan.assign(3, AttackStrategy{});
  config.attack_plan[0] = AttackStrategy{AttackKind::MultiPhotonTrojan, 1.0};
  const ProtocolOutcome out = qss::run_protocol(config);
  CHECK(out.verdict == Verdict::AbortAtHop);
  REQUIRE(out.abort_party.has_value());
  CHECK(*out.abort_party == qss::alice(2));
  CHECK(out.checks.back().multi_photon_detected);
  CHECK(out.abort_reason == "multi-photon signal detected");
}

TEST_CASE("out-of-band riders are invisible after filtering") {
  ProtocolConfig config = honest_config(6);
  config.block_size = 128;
  config.attack_plan.assign(3, AttackStrategy{});
  config.attack_plan[0] = AttackStrategy{AttackKind::InvisiblePhotonRider, 1.0};
  const ProtocolOutcome out = qss::run_protocol(config);
  CHECK(out.verdict == Verdict::Accept);
  CHECK(out.key_agreement);
  for (const auto& check : out.checks) {
    CHECK(check.errors == 0);
    CHECK_FALSE(check.multi_photon_detected);
  }
}

TEST_CASE("measured outcomes at key positions follow the composite label") {
  const ProtocolOutcome out = qss::run_protocol(honest_config(808));
  REQUIRE(out.verdict == Verdict::Accept);
  const std::span<const qss::PartySecret> senders(out.record.encoders.data(), 2);
  for (std::size_t i = 0; i < out.key_positions.size(); ++i) {
    const auto& q = measured_at(out.record, out.key_positions[i]);
    const qss::StateLabel full =
        qss::compose_label(q.origin, out.record.encoders);
    CHECK(q.outcome == full.value_bit);
    // the published key is the senders' composite, before the receivers' moves
    CHECK(out.final_key[i] == qss::compose_label(q.origin, senders));
  }
}
