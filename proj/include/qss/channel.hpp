#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qss/party.hpp"
#include "qss/qubit.hpp"
#include "qss/rng.hpp"

namespace qss {

// Joint state of a signal qubit and one attached probe qubit, ordered
// |signal, probe>. This is the only place a 4-dimensional state vector is
// needed; the probe is never measured by honest parties, it only shapes the
// signal's statistics.
class EntangledSignal {
 public:
  // Controlled-not with the signal as control on a fresh |0> probe.
  static EntangledSignal attach_probe(const QubitState& signal);

  void apply_signal_gate(Gate gate);
  double prob_signal_one(Basis basis) const;

  const std::array<Complex, 4>& amplitudes() const { return amps_; }

 private:
  std::array<Complex, 4> amps_{};  // index = 2*signal + probe
};

// A signal qubit in flight, possibly entangled with an eavesdropper probe.
class SignalState {
 public:
  explicit SignalState(QubitState state) : state_(std::move(state)) {}
  explicit SignalState(EntangledSignal state) : state_(std::move(state)) {}

  void apply(Gate gate);
  double prob_one(Basis basis) const;
  int measure(Basis basis, Rng& rng) const;

  bool entangled() const { return std::holds_alternative<EntangledSignal>(state_); }
  const QubitState* pure() const { return std::get_if<QubitState>(&state_); }

 private:
  std::variant<QubitState, EntangledSignal> state_;
};

struct SignalPhoton {
  SignalState state;
  bool in_band = true;  // false marks an out-of-band rider photon
};

// What travels over one channel use. Honest signals carry exactly one
// in-band photon; attacks may add photons or entangle the first one.
// origin_index is the position in the originally prepared block and stays
// stable while checks consume other positions.
struct PhotonSignal {
  std::vector<SignalPhoton> photons;
  std::size_t origin_index = 0;

  int photon_count() const { return static_cast<int>(photons.size()); }
  const SignalState& primary() const { return photons.front().state; }
  SignalState& primary() { return photons.front().state; }
};

PhotonSignal honest_signal(const QubitState& state, std::size_t origin_index);

enum class AttackKind : std::uint8_t {
  None = 0,
  InterceptResendZ,
  InterceptResendX,
  InterceptResendRandom,
  MeasureAll,
  EntanglingProbe,
  InvisiblePhotonRider,
  MultiPhotonTrojan,
};

std::string to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view text);

struct AttackStrategy {
  AttackKind kind = AttackKind::None;
  double coverage = 0.0;  // fraction of positions attacked, in [0, 1]
  friend bool operator==(const AttackStrategy&, const AttackStrategy&) = default;
};

struct ChannelSegment {
  PartyId from;
  PartyId to;
  AttackStrategy attack;
};

struct TransmitResult {
  std::vector<PhotonSignal> block;
  std::vector<std::size_t> attacked_positions;  // origin indices, ascending
};

// Moves a block across one segment, applying the segment's attack to a
// coverage fraction of positions. With kind None the block passes through
// untouched and no randomness is consumed.
TransmitResult transmit(std::vector<PhotonSignal> block,
                        const ChannelSegment& segment, Rng& rng);

struct FilterResult {
  std::vector<PhotonSignal> block;
  std::size_t stripped_photons = 0;
  std::vector<std::size_t> lost_positions;  // signals with no in-band photon left
};

// Wavelength filter at every receiver: drops out-of-band photons before
// anything enters the operation stage.
FilterResult filter_in_band(std::vector<PhotonSignal> block);

enum class PnsMode : std::uint8_t {
  Ge2,  // two or more photons count as an intrusion
  Gt2,  // strictly more than two photons count
};

std::string to_string(PnsMode mode);
PnsMode parse_pns_mode(std::string_view text);

// Photon-number splitter check on one sampled signal. Idealized detectors
// read the exact photon count and compare it against the mode threshold.
// The non-idealized model routes each photon 50/50 onto two threshold
// detectors and reports an intrusion only on a coincidence, which fires
// with probability 1 - 2^(1-count); the mode threshold is unobservable
// there since a coincidence only ever witnesses "at least two".
bool pns_check(const PhotonSignal& sample, PnsMode mode, bool idealized,
               Rng& rng);

enum class BasisChoice : std::uint8_t { Z, X, Random };

struct InterceptRecord {
  Basis basis;
  int outcome;
};

// Measure-and-resend on a single qubit: measures in the chosen basis and
// forwards the matching eigenstate.
std::pair<QubitState, InterceptRecord> eavesdrop_intercept_resend(
    const QubitState& state, BasisChoice choice, Rng& rng);

// Entangling attack: attaches a |0> probe through a controlled-not with the
// transiting qubit as control. The interaction itself is deterministic.
EntangledSignal eavesdrop_entangling(const QubitState& state);

}  // namespace qss
