#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qss/channel.hpp"
#include "qss/party.hpp"
#include "qss/qubit.hpp"
#include "qss/rng.hpp"
#include "qss/transcript.hpp"

namespace qss {

// One full protocol run: the first group's members each encode the block in
// turn, the second group continues, and the last receiver measures. Every
// receiving party filters out-of-band photons and checks a consumed sample
// of positions (photon count, conjugate-basis error rate) before adding her
// own encoding. After the final basis reconciliation a last sample of
// measured positions is compared publicly; whatever survives is key.
struct ProtocolConfig {
  int alices = 2;                 // senders, >= 2
  int bobs = 2;                   // receivers, >= 2
  std::size_t block_size = 128;   // qubits prepared by the first sender
  double sample_fraction = 0.25;  // per-check sample share, in [0, 1)
  double error_threshold = 0.11;  // abort when a check exceeds this
  std::vector<AttackStrategy> attack_plan;  // per segment; empty = honest
  std::uint64_t seed = 0;
  PnsMode pns_mode = PnsMode::Ge2;
  bool pns_idealized = true;
  bool record_transcript = false;

  friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

// Throws std::invalid_argument with a field-specific message. Also rejects
// sampling plans that would consume the whole block: the chain of per-check
// consumptions must leave at least one key position.
void validate_config(const ProtocolConfig& config);

int segment_count(const ProtocolConfig& config);  // alices + bobs - 1
AttackStrategy attack_for_segment(const ProtocolConfig& config, int segment);

// Pipeline order: alice_1 .. alice_m, bob_1 .. bob_n.
PartyId pipeline_party(const ProtocolConfig& config, int pipeline_index);

std::size_t sample_count(double fraction, std::size_t remaining);
std::size_t predicted_key_length(const ProtocolConfig& config);

// Label of the state at `position` after the given encoders have acted,
// in pipeline order starting from the preparing sender.
StateLabel compose_label(std::size_t position,
                         std::span<const PartySecret> encoders);

enum class Verdict : std::uint8_t { Accept, AbortAtHop, AbortFinalCheck };

std::string to_string(Verdict verdict);

enum class CheckStage : std::uint8_t { Receive, FinalSample, Group };

std::string to_string(CheckStage stage);

struct CheckResult {
  CheckStage stage = CheckStage::Receive;
  PartyId party;
  std::size_t sample_count = 0;
  std::size_t usable = 0;  // samples measured in the reconciled basis
  std::size_t errors = 0;
  double error_rate = 0.0;
  bool multi_photon_detected = false;
  bool lost_signal = false;
  bool proceed = true;
  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

struct MeasuredQubit {
  std::size_t origin = 0;
  Basis basis = Basis::Z;
  int outcome = 0;
  friend bool operator==(const MeasuredQubit&, const MeasuredQubit&) = default;
};

// Receive-side check at every intermediate party: in-band filter, sample
// selection, photon-number check and conjugate-basis comparison against the
// upstream announcements. Sampled positions are removed from the block.
CheckResult hop_receive_check(std::vector<PhotonSignal>& block,
                              std::span<const PartySecret> upstream,
                              PartyId receiver, const ProtocolConfig& config,
                              Rng& rng, Transcript* transcript);

// Last receiver's pre-measurement check: samples are announced first (in a
// per-position random party order), then measured directly in the basis the
// announcements imply, so every sample is usable.
CheckResult final_sample_check(std::vector<PhotonSignal>& block,
                               std::span<const PartySecret> encoders,
                               const ProtocolConfig& config, Rng& rng,
                               Transcript* transcript);

// Basis reconciliation and measurement of everything still in flight: all
// parties publish their Hadamard strings, the last receiver measures each
// remaining position in the XOR basis.
std::vector<MeasuredQubit> reconcile_and_measure(
    std::vector<PhotonSignal>& block, std::span<const PartySecret> encoders,
    Rng& rng, Transcript* transcript);

// Post-measurement group comparison: a final sample of measured positions is
// announced (op symbols and outcomes) and checked; those positions are
// removed from the key.
CheckResult group_sample_check(std::vector<MeasuredQubit>& measured,
                               std::span<const PartySecret> encoders,
                               const ProtocolConfig& config, Rng& rng,
                               Transcript* transcript);

// Key as the sending group can compute it: the labels the last sender put
// on the wire at the given positions.
std::vector<StateLabel> reconstruct_alice_key(
    std::span<const PartySecret> alice_secrets,
    std::span<const std::size_t> positions);

// Key as the receiving group can compute it: walk the last receiver's
// measurement results back through the receiving group's encodings.
std::vector<StateLabel> reconstruct_bob_key(
    std::span<const MeasuredQubit> outcomes,
    std::span<const PartySecret> bob_secrets,
    std::span<const std::size_t> positions);

// Everything a later analysis needs to re-derive knowledge and announcements
// of a finished run.
struct RunRecord {
  ProtocolConfig config;
  std::vector<PartySecret> encoders;   // alice_1..alice_m, bob_1..bob_{n-1}
  std::vector<MeasuredQubit> measured; // last receiver's reconciled outcomes
  std::vector<std::size_t> key_positions;
};

struct ProtocolOutcome {
  Verdict verdict = Verdict::Accept;
  std::optional<PartyId> abort_party;
  std::string abort_reason;  // empty on accept
  std::vector<CheckResult> checks;
  std::vector<std::size_t> key_positions;
  std::vector<StateLabel> final_key;  // the senders' composite labels
  std::vector<StateLabel> alice_key;
  std::vector<StateLabel> bob_key;
  bool key_agreement = false;  // alice_key == bob_key (accept only)
  RunRecord record;
  Transcript transcript;  // empty unless config.record_transcript
};

ProtocolOutcome run_protocol(const ProtocolConfig& config);

nlohmann::ordered_json config_to_json(const ProtocolConfig& config);
ProtocolConfig config_from_json(const nlohmann::json& j);

struct ReplayResult {
  bool identical = false;
  std::size_t logged_lines = 0;
  std::size_t replayed_lines = 0;
  std::optional<std::size_t> first_divergence;  // 0-based line index
};

// Re-executes the configuration embedded in a transcript and compares the
// regenerated log byte for byte.
ReplayResult replay_transcript(const std::string& transcript_text);

}  // namespace qss
