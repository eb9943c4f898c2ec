#include "qss/qubit.hpp"

#include <cmath>
#include <stdexcept>

namespace qss {

namespace {

void require_bit(std::uint8_t bit, const char* what) {
  if (bit > 1) throw std::invalid_argument(std::string(what) + " must be 0 or 1");
}

}  // namespace

GateMatrix gate_matrix(Gate gate) {
  GateMatrix m{};
  const double s = kInvSqrt2;
  switch (gate) {
    case Gate::Sigma0:
    case Gate::Identity:
      m[0][0] = 1.0;
      m[1][1] = 1.0;
      return m;
    case Gate::Sigma1:  // i*sigma_y: |0> -> -|1>, |1> -> |0>
      m[0][1] = 1.0;
      m[1][0] = -1.0;
      return m;
    case Gate::Sigma2:  // sigma_z
      m[0][0] = 1.0;
      m[1][1] = -1.0;
      return m;
    case Gate::Sigma3:  // sigma_x
      m[0][1] = 1.0;
      m[1][0] = 1.0;
      return m;
    case Gate::Hadamard:
      m[0][0] = s;
      m[0][1] = s;
      m[1][0] = s;
      m[1][1] = -s;
      return m;
  }
  throw std::invalid_argument("unknown gate");
}

Gate sigma_gate(int op_symbol) {
  switch (op_symbol) {
    case 0: return Gate::Sigma0;
    case 1: return Gate::Sigma1;
    case 2: return Gate::Sigma2;
    case 3: return Gate::Sigma3;
  }
  throw std::invalid_argument("op symbol must be in 0..3");
}

QubitState::QubitState(Complex amp0, Complex amp1) : amp0_(amp0), amp1_(amp1) {
  const double n = std::norm(amp0_) + std::norm(amp1_);
  if (std::abs(n - 1.0) > kAlgebraTolerance)
    throw std::invalid_argument("state vector is not normalized");
}

QubitState prepare(StateLabel label) {
  require_bit(label.value_bit, "value_bit");
  require_bit(label.basis_bit, "basis_bit");
  if (label.basis_bit == 0)
    return label.value_bit ? QubitState(0.0, 1.0) : QubitState(1.0, 0.0);
  const double s = kInvSqrt2;
  return label.value_bit ? QubitState(s, -s) : QubitState(s, s);
}

QubitState apply_gate(const QubitState& state, Gate gate) {
  const GateMatrix m = gate_matrix(gate);
  return QubitState(m[0][0] * state.amp0() + m[0][1] * state.amp1(),
                    m[1][0] * state.amp0() + m[1][1] * state.amp1());
}

StateLabel apply_label(StateLabel label, Gate gate) {
  require_bit(label.value_bit, "value_bit");
  require_bit(label.basis_bit, "basis_bit");
  StateLabel out = label;
  switch (gate) {
    case Gate::Sigma0:
    case Gate::Identity:
      return out;
    case Gate::Sigma1:  // flips the value in both bases
      out.value_bit ^= 1;
      return out;
    case Gate::Sigma2:  // flips the value only in the X basis
      out.value_bit ^= label.basis_bit;
      return out;
    case Gate::Sigma3:  // flips the value only in the Z basis
      out.value_bit ^= static_cast<std::uint8_t>(1 - label.basis_bit);
      return out;
    case Gate::Hadamard:  // swaps the bases, keeps the value
      out.basis_bit ^= 1;
      return out;
  }
  throw std::invalid_argument("unknown gate");
}

double prob_outcome_one(const QubitState& state, Basis basis) {
  if (basis == Basis::Z) return std::norm(state.amp1());
  // amplitude on |-> = (amp0 - amp1)/sqrt(2)
  return std::norm((state.amp0() - state.amp1()) * kInvSqrt2);
}

int measure(const QubitState& state, Basis basis, Rng& rng) {
  return rng.uniform01() < prob_outcome_one(state, basis) ? 1 : 0;
}

double fidelity(const QubitState& u, const QubitState& v) {
  const Complex inner =
      std::conj(u.amp0()) * v.amp0() + std::conj(u.amp1()) * v.amp1();
  return std::norm(inner);
}

bool equal_up_to_phase(const QubitState& u, const QubitState& v, double tol) {
  return fidelity(u, v) >= 1.0 - tol;
}

}  // namespace qss
