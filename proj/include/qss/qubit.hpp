#pragma once

#include <array>
#include <complex>
#include <cstdint>

#include "qss/rng.hpp"

namespace qss {

using Complex = std::complex<double>;

// Tolerance for algebraic identities (normalization, unitarity, fidelity).
inline constexpr double kAlgebraTolerance = 1e-12;
inline constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;

enum class Basis : std::uint8_t { Z = 0, X = 1 };

// Symbolic identity of one of the four protocol states, global phase
// dropped: basis_bit 0 selects the Z eigenstates |0>,|1>, basis_bit 1 the
// X eigenstates |+>,|->, and value_bit picks the state within the pair.
struct StateLabel {
  std::uint8_t value_bit = 0;
  std::uint8_t basis_bit = 0;

  Basis basis() const { return basis_bit ? Basis::X : Basis::Z; }
  friend bool operator==(const StateLabel&, const StateLabel&) = default;
};

// Gate alphabet used by the encoding parties. Sigma1 is i*sigma_y,
// Sigma2 is sigma_z, Sigma3 is sigma_x; Identity aliases Sigma0.
enum class Gate : std::uint8_t {
  Sigma0 = 0,
  Sigma1 = 1,
  Sigma2 = 2,
  Sigma3 = 3,
  Hadamard = 4,
  Identity = 5,
};

using GateMatrix = std::array<std::array<Complex, 2>, 2>;

GateMatrix gate_matrix(Gate gate);
Gate sigma_gate(int op_symbol);  // 0..3 -> Sigma0..Sigma3

// Normalized two-component state vector. Construction rejects vectors whose
// norm deviates from 1 by more than kAlgebraTolerance.
class QubitState {
 public:
  QubitState(Complex amp0, Complex amp1);

  Complex amp0() const { return amp0_; }
  Complex amp1() const { return amp1_; }

  friend bool operator==(const QubitState&, const QubitState&) = default;

 private:
  Complex amp0_;
  Complex amp1_;
};

QubitState prepare(StateLabel label);
QubitState apply_gate(const QubitState& state, Gate gate);

// Same transport on the symbolic side. For every gate G and label L,
// apply_gate(prepare(L), G) equals prepare(apply_label(L, G)) up to a
// global phase.
StateLabel apply_label(StateLabel label, Gate gate);

double prob_outcome_one(const QubitState& state, Basis basis);
int measure(const QubitState& state, Basis basis, Rng& rng);

// |<u|v>|^2. 1 exactly when the states differ only by a global phase.
double fidelity(const QubitState& u, const QubitState& v);
bool equal_up_to_phase(const QubitState& u, const QubitState& v,
                       double tol = kAlgebraTolerance);

}  // namespace qss
