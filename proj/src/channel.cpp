#include "qss/channel.hpp"

#include <algorithm>
#include <stdexcept>

namespace qss {

EntangledSignal EntangledSignal::attach_probe(const QubitState& signal) {
  EntangledSignal joint;
  joint.amps_[0] = signal.amp0();  // |0>|0>
  joint.amps_[3] = signal.amp1();  // |1>|1>
  return joint;
}

void EntangledSignal::apply_signal_gate(Gate gate) {
  const GateMatrix m = gate_matrix(gate);
  for (int probe = 0; probe < 2; ++probe) {
    const Complex v0 = amps_[probe];
    const Complex v1 = amps_[2 + probe];
    amps_[probe] = m[0][0] * v0 + m[0][1] * v1;
    amps_[2 + probe] = m[1][0] * v0 + m[1][1] * v1;
  }
}

double EntangledSignal::prob_signal_one(Basis basis) const {
  if (basis == Basis::Z) return std::norm(amps_[2]) + std::norm(amps_[3]);
  double p = 0.0;
  for (int probe = 0; probe < 2; ++probe) {
    const Complex c = (amps_[probe] - amps_[2 + probe]) * kInvSqrt2;
    p += std::norm(c);
  }
  return p;
}

void SignalState::apply(Gate gate) {
  if (auto* pure = std::get_if<QubitState>(&state_)) {
    state_ = apply_gate(*pure, gate);
  } else {
    std::get<EntangledSignal>(state_).apply_signal_gate(gate);
  }
}

double SignalState::prob_one(Basis basis) const {
  if (const auto* pure = std::get_if<QubitState>(&state_))
    return prob_outcome_one(*pure, basis);
  return std::get<EntangledSignal>(state_).prob_signal_one(basis);
}

int SignalState::measure(Basis basis, Rng& rng) const {
  return rng.uniform01() < prob_one(basis) ? 1 : 0;
}

PhotonSignal honest_signal(const QubitState& state, std::size_t origin_index) {
  PhotonSignal signal;
  signal.photons.push_back(SignalPhoton{SignalState(state), true});
  signal.origin_index = origin_index;
  return signal;
}

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::None: return "none";
    case AttackKind::InterceptResendZ: return "intercept_resend_z";
    case AttackKind::InterceptResendX: return "intercept_resend_x";
    case AttackKind::InterceptResendRandom: return "intercept_resend_random";
    case AttackKind::MeasureAll: return "measure_all";
    case AttackKind::EntanglingProbe: return "entangling_probe";
    case AttackKind::InvisiblePhotonRider: return "invisible_photon_rider";
    case AttackKind::MultiPhotonTrojan: return "multi_photon_trojan";
  }
  throw std::invalid_argument("unknown attack kind");
}

AttackKind parse_attack_kind(std::string_view text) {
  for (int k = 0; k <= static_cast<int>(AttackKind::MultiPhotonTrojan); ++k) {
    const auto kind = static_cast<AttackKind>(k);
    if (to_string(kind) == text) return kind;
  }
  throw std::invalid_argument("unknown attack kind '" + std::string(text) + "'");
}

std::string to_string(PnsMode mode) {
  return mode == PnsMode::Ge2 ? "ge2" : "gt2";
}

PnsMode parse_pns_mode(std::string_view text) {
  if (text == "ge2") return PnsMode::Ge2;
  if (text == "gt2") return PnsMode::Gt2;
  throw std::invalid_argument("pns mode must be 'ge2' or 'gt2', got '" +
                              std::string(text) + "'");
}

namespace {

Basis resolve_basis(BasisChoice choice, Rng& rng) {
  switch (choice) {
    case BasisChoice::Z: return Basis::Z;
    case BasisChoice::X: return Basis::X;
    case BasisChoice::Random: return rng.uniform_below(2) ? Basis::X : Basis::Z;
  }
  throw std::invalid_argument("unknown basis choice");
}

// Measure-and-resend applied in place to one photon; handles entangled
// signal states by collapsing them to the resent eigenstate.
void intercept_photon(SignalPhoton& photon, BasisChoice choice, Rng& rng) {
  const Basis basis = resolve_basis(choice, rng);
  const int outcome = photon.state.measure(basis, rng);
  const StateLabel label{static_cast<std::uint8_t>(outcome),
                         static_cast<std::uint8_t>(basis == Basis::X ? 1 : 0)};
  photon.state = SignalState(prepare(label));
}

void attack_signal(PhotonSignal& signal, AttackKind kind, Rng& rng) {
  switch (kind) {
    case AttackKind::None:
      return;
    case AttackKind::InterceptResendZ:
      intercept_photon(signal.photons.front(), BasisChoice::Z, rng);
      return;
    case AttackKind::InterceptResendX:
      intercept_photon(signal.photons.front(), BasisChoice::X, rng);
      return;
    case AttackKind::InterceptResendRandom:
      intercept_photon(signal.photons.front(), BasisChoice::Random, rng);
      return;
    case AttackKind::MeasureAll:
      for (auto& photon : signal.photons)
        intercept_photon(photon, BasisChoice::Random, rng);
      return;
    case AttackKind::EntanglingProbe: {
      // One probe per signal; a second pass leaves the joint state alone.
      auto& primary = signal.primary();
      if (const QubitState* pure = primary.pure())
        primary = SignalState(eavesdrop_entangling(*pure));
      return;
    }
    case AttackKind::InvisiblePhotonRider:
      signal.photons.push_back(SignalPhoton{SignalState(QubitState(1.0, 0.0)), false});
      return;
    case AttackKind::MultiPhotonTrojan:
      signal.photons.push_back(SignalPhoton{SignalState(QubitState(1.0, 0.0)), true});
      return;
  }
  throw std::invalid_argument("unknown attack kind");
}

}  // namespace

TransmitResult transmit(std::vector<PhotonSignal> block,
                        const ChannelSegment& segment, Rng& rng) {
  TransmitResult result;
  result.block = std::move(block);
  const AttackStrategy& attack = segment.attack;
  if (attack.kind == AttackKind::None) return result;
  if (attack.coverage < 0.0 || attack.coverage > 1.0)
    throw std::invalid_argument("attack coverage must be in [0, 1]");
  for (auto& signal : result.block) {
    if (!rng.bernoulli(attack.coverage)) continue;
    attack_signal(signal, attack.kind, rng);
    result.attacked_positions.push_back(signal.origin_index);
  }
  return result;
}

FilterResult filter_in_band(std::vector<PhotonSignal> block) {
  FilterResult result;
  result.block = std::move(block);
  for (auto& signal : result.block) {
    auto& photons = signal.photons;
    // remove_if keeps the surviving photons in order, so the honest photon
    // stays first.
    const auto kept = std::remove_if(
        photons.begin(), photons.end(),
        [](const SignalPhoton& p) { return !p.in_band; });
    result.stripped_photons += static_cast<std::size_t>(photons.end() - kept);
    photons.erase(kept, photons.end());
    if (photons.empty()) result.lost_positions.push_back(signal.origin_index);
  }
  return result;
}

bool pns_check(const PhotonSignal& sample, PnsMode mode, bool idealized,
               Rng& rng) {
  const int count = sample.photon_count();
  if (count < 1) throw std::invalid_argument("signal carries no photon");
  if (idealized) {
    const int threshold = mode == PnsMode::Ge2 ? 2 : 3;
    return count >= threshold;
  }
  int left = 0, right = 0;
  for (int i = 0; i < count; ++i) (rng.uniform_below(2) ? left : right) += 1;
  return left > 0 && right > 0;
}

std::pair<QubitState, InterceptRecord> eavesdrop_intercept_resend(
    const QubitState& state, BasisChoice choice, Rng& rng) {
  const Basis basis = resolve_basis(choice, rng);
  const int outcome = measure(state, basis, rng);
  const StateLabel label{static_cast<std::uint8_t>(outcome),
                         static_cast<std::uint8_t>(basis == Basis::X ? 1 : 0)};
  return {prepare(label), InterceptRecord{basis, outcome}};
}

EntangledSignal eavesdrop_entangling(const QubitState& state) {
  return EntangledSignal::attach_probe(state);
}

}  // namespace qss
