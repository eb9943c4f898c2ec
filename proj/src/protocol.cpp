#include "qss/protocol.hpp"

#include "qss/json_util.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace qss {

using nlohmann::ordered_json;

namespace {

const char* basis_name(Basis basis) { return basis == Basis::X ? "X" : "Z"; }

ordered_json u8_array(const std::vector<std::uint8_t>& v) {
  ordered_json a = ordered_json::array();
  for (auto x : v) a.push_back(static_cast<int>(x));
  return a;
}

ordered_json size_array(const std::vector<std::size_t>& v) {
  ordered_json a = ordered_json::array();
  for (auto x : v) a.push_back(x);
  return a;
}

// Partial Fisher-Yates: k distinct indices out of [0, size), returned
// ascending. Consumes exactly k draws.
std::vector<std::size_t> choose_without_replacement(std::size_t size,
                                                    std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j =
        i + rng.uniform_below(static_cast<std::uint32_t>(size - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Uniform permutation of [0, size); consumes size-1 draws.
std::vector<std::size_t> random_permutation(std::size_t size, Rng& rng) {
  std::vector<std::size_t> perm(size);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = size; i > 1; --i) {
    const std::size_t j = rng.uniform_below(static_cast<std::uint32_t>(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

// Drops the picked (ascending) indices from a vector in one pass.
template <typename T>
void remove_indices(std::vector<T>& items, const std::vector<std::size_t>& picks) {
  if (picks.empty()) return;
  std::vector<T> kept;
  kept.reserve(items.size() - picks.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (next < picks.size() && picks[next] == i) {
      ++next;
      continue;
    }
    kept.push_back(std::move(items[i]));
  }
  items = std::move(kept);
}

std::string abort_reason_for(const CheckResult& check) {
  if (check.lost_signal) return "signal lost after in-band filtering";
  if (check.multi_photon_detected) return "multi-photon signal detected";
  std::ostringstream oss;
  oss << "sample error rate " << check.error_rate << " above threshold";
  return oss.str();
}

void emit_check_result(Transcript* tr, const CheckResult& check) {
  if (!tr) return;
  tr->emit({{"event", "check_result"},
            {"party", to_string(check.party)},
            {"stage", to_string(check.stage)},
            {"samples", check.sample_count},
            {"usable", check.usable},
            {"errors", check.errors},
            {"error_rate", check.error_rate},
            {"multi_photon", check.multi_photon_detected},
            {"lost", check.lost_signal},
            {"verdict", check.proceed ? "proceed" : "abort"}});
}

}  // namespace

void validate_config(const ProtocolConfig& config) {
  if (config.alices < 2)
    throw std::invalid_argument("alices: the sending group needs at least 2 members");
  if (config.bobs < 2)
    throw std::invalid_argument("bobs: the receiving group needs at least 2 members");
  if (config.block_size < 1)
    throw std::invalid_argument("block_size: must be >= 1");
  if (config.block_size > (1ULL << 31))
    throw std::invalid_argument("block_size: too large");
  if (!(config.sample_fraction >= 0.0 && config.sample_fraction < 1.0))
    throw std::invalid_argument("sample_fraction: must be in [0, 1)");
  if (!(config.error_threshold >= 0.0 && config.error_threshold < 1.0))
    throw std::invalid_argument("error_threshold: must be in [0, 1)");
  if (!config.attack_plan.empty() &&
      config.attack_plan.size() != static_cast<std::size_t>(segment_count(config)))
    throw std::invalid_argument(
        "attack_plan: need one strategy per channel segment, or none");
  for (const auto& strategy : config.attack_plan)
    if (!(strategy.coverage >= 0.0 && strategy.coverage <= 1.0))
      throw std::invalid_argument("attack_plan: coverage must be in [0, 1]");
  if (predicted_key_length(config) < 1)
    throw std::invalid_argument(
        "block_size: the sampling plan consumes every position; nothing left for key");
}

int segment_count(const ProtocolConfig& config) {
  return config.alices + config.bobs - 1;
}

AttackStrategy attack_for_segment(const ProtocolConfig& config, int segment) {
  if (segment < 0 || segment >= segment_count(config))
    throw std::out_of_range("segment index outside the pipeline");
  if (config.attack_plan.empty()) return AttackStrategy{};
  return config.attack_plan[static_cast<std::size_t>(segment)];
}

PartyId pipeline_party(const ProtocolConfig& config, int pipeline_index) {
  if (pipeline_index < 0 || pipeline_index >= config.alices + config.bobs)
    throw std::out_of_range("pipeline index outside the party list");
  if (pipeline_index < config.alices) return alice(pipeline_index + 1);
  return bob(pipeline_index - config.alices + 1);
}

std::size_t sample_count(double fraction, std::size_t remaining) {
  if (remaining == 0) return 0;
  return static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(remaining)));
}

std::size_t predicted_key_length(const ProtocolConfig& config) {
  std::size_t remaining = config.block_size;
  const int checks = (config.alices - 1) + (config.bobs - 1) + 2;
  for (int i = 0; i < checks; ++i) {
    const std::size_t consumed =
        std::min(remaining, sample_count(config.sample_fraction, remaining));
    remaining -= consumed;
  }
  return remaining;
}

StateLabel compose_label(std::size_t position,
                         std::span<const PartySecret> encoders) {
  if (encoders.empty())
    throw std::invalid_argument("label composition needs at least the preparer");
  const PartySecret& first = encoders.front();
  if (!is_alice_one(first.party))
    throw std::invalid_argument("the encoder chain must start with the first sender");
  if (position >= first.op_string.size())
    throw std::out_of_range("position outside the block");
  StateLabel label{first.op_string[position], first.had_string[position]};
  for (std::size_t i = 1; i < encoders.size(); ++i) {
    const PartySecret& enc = encoders[i];
    if (position >= enc.op_string.size())
      throw std::out_of_range("position outside the block");
    label = label_shift(label, enc.op_string[position], enc.had_string[position]);
  }
  return label;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Accept: return "accept";
    case Verdict::AbortAtHop: return "abort_at_hop";
    case Verdict::AbortFinalCheck: return "abort_final_check";
  }
  throw std::invalid_argument("unknown verdict");
}

std::string to_string(CheckStage stage) {
  switch (stage) {
    case CheckStage::Receive: return "receive";
    case CheckStage::FinalSample: return "final_sample";
    case CheckStage::Group: return "group";
  }
  throw std::invalid_argument("unknown check stage");
}

CheckResult hop_receive_check(std::vector<PhotonSignal>& block,
                              std::span<const PartySecret> upstream,
                              PartyId receiver, const ProtocolConfig& config,
                              Rng& rng, Transcript* transcript) {
  CheckResult check;
  check.stage = CheckStage::Receive;
  check.party = receiver;

  FilterResult filtered = filter_in_band(std::move(block));
  block = std::move(filtered.block);
  if (transcript)
    transcript->emit({{"event", "filter"},
                      {"party", to_string(receiver)},
                      {"stripped", filtered.stripped_photons},
                      {"lost", size_array(filtered.lost_positions)}});
  if (!filtered.lost_positions.empty()) {
    check.lost_signal = true;
    check.proceed = false;
    emit_check_result(transcript, check);
    return check;
  }

  const std::size_t k = sample_count(config.sample_fraction, block.size());
  const auto picks = choose_without_replacement(block.size(), k, rng);
  check.sample_count = k;
  if (transcript) {
    std::vector<std::size_t> origins;
    origins.reserve(picks.size());
    for (auto idx : picks) origins.push_back(block[idx].origin_index);
    transcript->emit({{"event", "sample_select"},
                      {"party", to_string(receiver)},
                      {"stage", "receive"},
                      {"positions", size_array(origins)}});
  }

  for (const std::size_t idx : picks) {
    PhotonSignal& signal = block[idx];
    const bool detected =
        pns_check(signal, config.pns_mode, config.pns_idealized, rng);
    if (transcript)
      transcript->emit({{"event", "pns_check"},
                        {"party", to_string(receiver)},
                        {"position", signal.origin_index},
                        {"photons", signal.photon_count()},
                        {"detected", detected}});
    if (detected) {
      check.multi_photon_detected = true;
      check.proceed = false;
      emit_check_result(transcript, check);
      return check;
    }

    const Basis mb = rng.uniform_below(2) ? Basis::X : Basis::Z;
    const int outcome = signal.primary().measure(mb, rng);
    if (transcript)
      transcript->emit({{"event", "sample_measure"},
                        {"party", to_string(receiver)},
                        {"position", signal.origin_index},
                        {"basis", basis_name(mb)},
                        {"outcome", outcome}});

    // everyone upstream reveals this position
    if (transcript)
      for (const auto& enc : upstream)
        transcript->emit({{"event", "announce"},
                          {"party", to_string(enc.party)},
                          {"position", signal.origin_index},
                          {"op", enc.op_string[signal.origin_index]},
                          {"had", enc.had_string[signal.origin_index]}});
    const StateLabel expected = compose_label(signal.origin_index, upstream);
    if (mb == expected.basis()) {
      ++check.usable;
      if (outcome != expected.value_bit) ++check.errors;
    }
  }

  check.error_rate =
      check.usable ? static_cast<double>(check.errors) / check.usable : 0.0;
  check.proceed = !(check.error_rate > config.error_threshold);
  emit_check_result(transcript, check);
  remove_indices(block, picks);
  return check;
}

CheckResult final_sample_check(std::vector<PhotonSignal>& block,
                               std::span<const PartySecret> encoders,
                               const ProtocolConfig& config, Rng& rng,
                               Transcript* transcript) {
  CheckResult check;
  check.stage = CheckStage::FinalSample;
  check.party = bob(config.bobs);

  FilterResult filtered = filter_in_band(std::move(block));
  block = std::move(filtered.block);
  if (transcript)
    transcript->emit({{"event", "filter"},
                      {"party", to_string(check.party)},
                      {"stripped", filtered.stripped_photons},
                      {"lost", size_array(filtered.lost_positions)}});
  if (!filtered.lost_positions.empty()) {
    check.lost_signal = true;
    check.proceed = false;
    emit_check_result(transcript, check);
    return check;
  }

  const std::size_t k = sample_count(config.sample_fraction, block.size());
  const auto picks = choose_without_replacement(block.size(), k, rng);
  check.sample_count = k;
  if (transcript) {
    std::vector<std::size_t> origins;
    origins.reserve(picks.size());
    for (auto idx : picks) origins.push_back(block[idx].origin_index);
    transcript->emit({{"event", "sample_select"},
                      {"party", to_string(check.party)},
                      {"stage", "final_sample"},
                      {"positions", size_array(origins)}});
  }

  for (const std::size_t idx : picks) {
    PhotonSignal& signal = block[idx];
    const bool detected =
        pns_check(signal, config.pns_mode, config.pns_idealized, rng);
    if (transcript)
      transcript->emit({{"event", "pns_check"},
                        {"party", to_string(check.party)},
                        {"position", signal.origin_index},
                        {"photons", signal.photon_count()},
                        {"detected", detected}});
    if (detected) {
      check.multi_photon_detected = true;
      check.proceed = false;
      emit_check_result(transcript, check);
      return check;
    }

    // announcements first, in a fresh random party order per position; the
    // reconciled basis is then known before the measurement happens
    const auto order = random_permutation(encoders.size(), rng);
    if (transcript) {
      ordered_json names = ordered_json::array();
      for (auto oi : order) names.push_back(to_string(encoders[oi].party));
      transcript->emit({{"event", "announce_order"},
                        {"position", signal.origin_index},
                        {"order", names}});
      for (auto oi : order)
        transcript->emit({{"event", "announce"},
                          {"party", to_string(encoders[oi].party)},
                          {"position", signal.origin_index},
                          {"op", encoders[oi].op_string[signal.origin_index]},
                          {"had", encoders[oi].had_string[signal.origin_index]}});
    }
    const StateLabel expected = compose_label(signal.origin_index, encoders);
    const int outcome = signal.primary().measure(expected.basis(), rng);
    if (transcript)
      transcript->emit({{"event", "sample_measure"},
                        {"party", to_string(check.party)},
                        {"position", signal.origin_index},
                        {"basis", basis_name(expected.basis())},
                        {"outcome", outcome}});
    ++check.usable;
    if (outcome != expected.value_bit) ++check.errors;
  }

  check.error_rate =
      check.usable ? static_cast<double>(check.errors) / check.usable : 0.0;
  check.proceed = !(check.error_rate > config.error_threshold);
  emit_check_result(transcript, check);
  remove_indices(block, picks);
  return check;
}

std::vector<MeasuredQubit> reconcile_and_measure(
    std::vector<PhotonSignal>& block, std::span<const PartySecret> encoders,
    Rng& rng, Transcript* transcript) {
  if (transcript)
    for (const auto& enc : encoders)
      transcript->emit({{"event", "basis_announce"},
                        {"party", to_string(enc.party)},
                        {"bits", u8_array(enc.had_string)}});

  std::vector<MeasuredQubit> measured;
  measured.reserve(block.size());
  for (auto& signal : block) {
    std::uint8_t basis_bit = 0;
    for (const auto& enc : encoders)
      basis_bit ^= enc.had_string[signal.origin_index];
    const Basis basis = basis_bit ? Basis::X : Basis::Z;
    const int outcome = signal.primary().measure(basis, rng);
    measured.push_back(MeasuredQubit{signal.origin_index, basis, outcome});
  }
  if (transcript) {
    ordered_json positions = ordered_json::array();
    ordered_json bases = ordered_json::array();
    ordered_json outcomes = ordered_json::array();
    for (const auto& mq : measured) {
      positions.push_back(mq.origin);
      bases.push_back(basis_name(mq.basis));
      outcomes.push_back(mq.outcome);
    }
    transcript->emit({{"event", "measure_block"},
                      {"positions", positions},
                      {"bases", bases},
                      {"outcomes", outcomes}});
  }
  block.clear();
  return measured;
}

CheckResult group_sample_check(std::vector<MeasuredQubit>& measured,
                               std::span<const PartySecret> encoders,
                               const ProtocolConfig& config, Rng& rng,
                               Transcript* transcript) {
  CheckResult check;
  check.stage = CheckStage::Group;
  check.party = bob(config.bobs);

  const std::size_t k = sample_count(config.sample_fraction, measured.size());
  const auto picks = choose_without_replacement(measured.size(), k, rng);
  check.sample_count = k;
  if (transcript) {
    std::vector<std::size_t> origins;
    origins.reserve(picks.size());
    for (auto idx : picks) origins.push_back(measured[idx].origin);
    transcript->emit({{"event", "sample_select"},
                      {"party", to_string(check.party)},
                      {"stage", "group"},
                      {"positions", size_array(origins)}});
  }

  for (const std::size_t idx : picks) {
    const MeasuredQubit& mq = measured[idx];
    if (transcript) {
      for (const auto& enc : encoders)
        transcript->emit({{"event", "announce"},
                          {"party", to_string(enc.party)},
                          {"position", mq.origin},
                          {"op", enc.op_string[mq.origin]}});
      transcript->emit({{"event", "outcome_announce"},
                        {"party", to_string(check.party)},
                        {"position", mq.origin},
                        {"outcome", mq.outcome}});
    }
    const StateLabel expected = compose_label(mq.origin, encoders);
    ++check.usable;
    if (mq.outcome != expected.value_bit) ++check.errors;
  }

  check.error_rate =
      check.usable ? static_cast<double>(check.errors) / check.usable : 0.0;
  check.proceed = !(check.error_rate > config.error_threshold);
  emit_check_result(transcript, check);
  remove_indices(measured, picks);
  return check;
}

std::vector<StateLabel> reconstruct_alice_key(
    std::span<const PartySecret> alice_secrets,
    std::span<const std::size_t> positions) {
  if (alice_secrets.empty())
    throw std::invalid_argument("key reconstruction needs the sender secrets");
  for (std::size_t i = 0; i < alice_secrets.size(); ++i) {
    const PartyId expected = alice(static_cast<int>(i) + 1);
    if (!(alice_secrets[i].party == expected))
      throw std::invalid_argument("sender secrets must be alice_1..alice_m in order");
  }
  std::vector<StateLabel> key;
  key.reserve(positions.size());
  for (const std::size_t pos : positions)
    key.push_back(compose_label(pos, alice_secrets));
  return key;
}

std::vector<StateLabel> reconstruct_bob_key(
    std::span<const MeasuredQubit> outcomes,
    std::span<const PartySecret> bob_secrets,
    std::span<const std::size_t> positions) {
  for (std::size_t j = 0; j < bob_secrets.size(); ++j) {
    const PartyId expected = bob(static_cast<int>(j) + 1);
    if (!(bob_secrets[j].party == expected))
      throw std::invalid_argument(
          "receiver secrets must be bob_1..bob_{n-1} in order");
  }
  std::unordered_map<std::size_t, const MeasuredQubit*> by_origin;
  by_origin.reserve(outcomes.size());
  for (const auto& mq : outcomes) by_origin[mq.origin] = &mq;

  std::vector<StateLabel> key;
  key.reserve(positions.size());
  for (const std::size_t pos : positions) {
    const auto it = by_origin.find(pos);
    if (it == by_origin.end())
      throw std::invalid_argument("no measurement recorded for a key position");
    const MeasuredQubit& mq = *it->second;
    StateLabel label{static_cast<std::uint8_t>(mq.outcome),
                     static_cast<std::uint8_t>(mq.basis == Basis::X ? 1 : 0)};
    for (std::size_t j = bob_secrets.size(); j > 0; --j) {
      const PartySecret& enc = bob_secrets[j - 1];
      label = label_unshift(label, enc.op_string[pos], enc.had_string[pos]);
    }
    key.push_back(label);
  }
  return key;
}

ProtocolOutcome run_protocol(const ProtocolConfig& config) {
  validate_config(config);

  ProtocolOutcome out;
  out.record.config = config;
  Rng rng(config.seed);
  Transcript* tr = config.record_transcript ? &out.transcript : nullptr;
  if (tr)
    tr->emit({{"event", "config"}, {"protocol", config_to_json(config)}});

  const int m = config.alices;
  const int n = config.bobs;
  const std::size_t block_size = config.block_size;

  auto& encoders = out.record.encoders;
  encoders.reserve(static_cast<std::size_t>(m + n - 1));

  encoders.push_back(generate_secret(alice(1), block_size, rng));
  const auto labels = initial_prepare(encoders.front());
  std::vector<PhotonSignal> block;
  block.reserve(block_size);
  for (std::size_t k = 0; k < block_size; ++k)
    block.push_back(honest_signal(prepare(labels[k]), k));
  if (tr)
    tr->emit({{"event", "prepare_block"},
              {"party", "alice_1"},
              {"values", u8_array(encoders.front().op_string)},
              {"bases", u8_array(encoders.front().had_string)}});

  const auto abort_with = [&](PartyId party, const CheckResult& check,
                              Verdict verdict) {
    out.verdict = verdict;
    out.abort_party = party;
    out.abort_reason = abort_reason_for(check);
    if (tr)
      tr->emit({{"event", "verdict"},
                {"result", to_string(verdict)},
                {"party", to_string(party)},
                {"reason", out.abort_reason},
                {"key_length", 0}});
  };

  const int pipeline_size = m + n;
  for (int pi = 1; pi < pipeline_size; ++pi) {
    const PartyId sender = pipeline_party(config, pi - 1);
    const PartyId receiver = pipeline_party(config, pi);
    const ChannelSegment segment{sender, receiver,
                                 attack_for_segment(config, pi - 1)};
    TransmitResult moved = transmit(std::move(block), segment, rng);
    block = std::move(moved.block);
    if (tr)
      tr->emit({{"event", "transmit"},
                {"from", to_string(sender)},
                {"to", to_string(receiver)},
                {"attack", to_string(segment.attack.kind)},
                {"coverage", segment.attack.coverage},
                {"attacked", size_array(moved.attacked_positions)}});

    const bool last_receiver = (pi == pipeline_size - 1);
    if (!last_receiver) {
      CheckResult check =
          hop_receive_check(block, encoders, receiver, config, rng, tr);
      out.checks.push_back(check);
      if (!check.proceed) {
        abort_with(receiver, check, Verdict::AbortAtHop);
        return out;
      }
      encoders.push_back(generate_secret(receiver, block_size, rng));
      const PartySecret& secret = encoders.back();
      for (auto& signal : block) {
        const std::size_t pos = signal.origin_index;
        const Gate sigma = sigma_gate(secret.op_string[pos]);
        for (auto& photon : signal.photons) {
          photon.state.apply(sigma);
          if (secret.had_string[pos]) photon.state.apply(Gate::Hadamard);
        }
      }
      if (tr)
        tr->emit({{"event", "encode_block"},
                  {"party", to_string(receiver)},
                  {"ops", u8_array(secret.op_string)},
                  {"hads", u8_array(secret.had_string)}});
    } else {
      CheckResult check =
          final_sample_check(block, encoders, config, rng, tr);
      out.checks.push_back(check);
      if (!check.proceed) {
        abort_with(receiver, check, Verdict::AbortAtHop);
        return out;
      }
    }
  }

  std::vector<MeasuredQubit> measured =
      reconcile_and_measure(block, encoders, rng, tr);
  out.record.measured = measured;

  CheckResult group_check =
      group_sample_check(measured, encoders, config, rng, tr);
  out.checks.push_back(group_check);
  if (!group_check.proceed) {
    abort_with(bob(n), group_check, Verdict::AbortFinalCheck);
    return out;
  }

  out.key_positions.reserve(measured.size());
  for (const auto& mq : measured) out.key_positions.push_back(mq.origin);
  out.record.key_positions = out.key_positions;

  const std::span<const PartySecret> alice_span(encoders.data(),
                                                static_cast<std::size_t>(m));
  const std::span<const PartySecret> bob_span(
      encoders.data() + m, static_cast<std::size_t>(n - 1));
  out.alice_key = reconstruct_alice_key(alice_span, out.key_positions);
  out.bob_key =
      reconstruct_bob_key(out.record.measured, bob_span, out.key_positions);
  out.final_key = out.alice_key;
  out.key_agreement = (out.alice_key == out.bob_key);
  out.verdict = Verdict::Accept;

  if (tr) {
    tr->emit({{"event", "verdict"},
              {"result", "accept"},
              {"key_length", out.key_positions.size()}});
    ordered_json values = ordered_json::array();
    ordered_json bases = ordered_json::array();
    for (const auto& label : out.final_key) {
      values.push_back(static_cast<int>(label.value_bit));
      bases.push_back(static_cast<int>(label.basis_bit));
    }
    tr->emit({{"event", "key"},
              {"positions", size_array(out.key_positions)},
              {"values", values},
              {"bases", bases},
              {"agreement", out.key_agreement}});
  }
  return out;
}

nlohmann::ordered_json config_to_json(const ProtocolConfig& config) {
  ordered_json j;
  j["alices"] = config.alices;
  j["bobs"] = config.bobs;
  j["block_size"] = config.block_size;
  j["sample_fraction"] = config.sample_fraction;
  j["error_threshold"] = config.error_threshold;
  j["pns_mode"] = to_string(config.pns_mode);
  j["pns_idealized"] = config.pns_idealized;
  j["seed"] = config.seed;
  ordered_json attacks = ordered_json::array();
  for (int s = 0; s < segment_count(config); ++s) {
    const AttackStrategy strategy = attack_for_segment(config, s);
    if (strategy.kind == AttackKind::None) continue;
    attacks.push_back({{"after", to_string(pipeline_party(config, s))},
                       {"kind", to_string(strategy.kind)},
                       {"coverage", strategy.coverage}});
  }
  j["attacks"] = attacks;
  return j;
}

ProtocolConfig config_from_json(const nlohmann::json& j) {
  using detail::field_or;
  using detail::require_known_fields;
  const char* ctx = "protocol";
  if (!j.is_object())
    throw std::invalid_argument("protocol: expected an object");
  require_known_fields(j,
                       {"alices", "bobs", "block_size", "sample_fraction",
                        "error_threshold", "pns_mode", "pns_idealized", "seed",
                        "attacks"},
                       ctx);
  ProtocolConfig config;
  config.alices = field_or(j, "alices", config.alices, ctx);
  config.bobs = field_or(j, "bobs", config.bobs, ctx);
  config.block_size = field_or(j, "block_size", config.block_size, ctx);
  config.sample_fraction =
      field_or(j, "sample_fraction", config.sample_fraction, ctx);
  config.error_threshold =
      field_or(j, "error_threshold", config.error_threshold, ctx);
  config.pns_mode =
      parse_pns_mode(field_or<std::string>(j, "pns_mode", "ge2", ctx));
  config.pns_idealized = field_or(j, "pns_idealized", config.pns_idealized, ctx);
  config.seed = field_or(j, "seed", config.seed, ctx);

  if (config.alices < 2 || config.bobs < 2)
    throw std::invalid_argument(
        "protocol: both groups need at least 2 members");
  if (j.contains("attacks")) {
    const auto& attacks = j.at("attacks");
    if (!attacks.is_array())
      throw std::invalid_argument("protocol: field 'attacks' must be a list");
    // an empty list stays an empty plan, so honest configs round trip
    if (!attacks.empty())
      config.attack_plan.assign(
          static_cast<std::size_t>(segment_count(config)), AttackStrategy{});
    for (const auto& entry : attacks) {
      require_known_fields(entry, {"after", "kind", "coverage"},
                           "protocol.attacks");
      const std::string after =
          field_or<std::string>(entry, "after", "", "protocol.attacks");
      if (after.empty())
        throw std::invalid_argument(
            "protocol.attacks: every entry needs 'after', the sending party");
      const PartyId sender = parse_party(after);
      int segment = -1;
      for (int s = 0; s < segment_count(config); ++s)
        if (pipeline_party(config, s) == sender) segment = s;
      if (segment < 0)
        throw std::invalid_argument("protocol.attacks: '" + after +
                                    "' does not send on any segment");
      AttackStrategy strategy;
      strategy.kind = parse_attack_kind(
          field_or<std::string>(entry, "kind", "none", "protocol.attacks"));
      strategy.coverage = field_or(entry, "coverage", 1.0, "protocol.attacks");
      config.attack_plan[static_cast<std::size_t>(segment)] = strategy;
    }
  }
  return config;
}

ReplayResult replay_transcript(const std::string& transcript_text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < transcript_text.size()) {
    std::size_t end = transcript_text.find('\n', start);
    if (end == std::string::npos) end = transcript_text.size();
    lines.push_back(transcript_text.substr(start, end - start));
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty())
    throw std::invalid_argument("transcript is empty");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(lines.front());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("transcript header is not valid: ") +
                                e.what());
  }
  if (!header.is_object() || header.value("event", "") != "config" ||
      !header.contains("protocol"))
    throw std::invalid_argument(
        "transcript must start with a config event carrying the protocol");

  ProtocolConfig config = config_from_json(header.at("protocol"));
  config.record_transcript = true;
  const ProtocolOutcome outcome = run_protocol(config);
  const auto& fresh = outcome.transcript.lines();

  ReplayResult result;
  result.logged_lines = lines.size();
  result.replayed_lines = fresh.size();
  const std::size_t common = std::min(lines.size(), fresh.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (lines[i] != fresh[i]) {
      result.first_divergence = i;
      break;
    }
  }
  if (!result.first_divergence && lines.size() != fresh.size())
    result.first_divergence = common;
  result.identical = !result.first_divergence.has_value();
  return result;
}

}  // namespace qss
