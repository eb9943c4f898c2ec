#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "qss/qubit.hpp"
#include "qss/rng.hpp"

using qss::Basis;
using qss::Gate;
using qss::QubitState;
using qss::StateLabel;
using Complex = std::complex<double>;

namespace {

// Independent oracle: states and matrices written out from scratch, used
// only to cross-check the library's label arithmetic against the actual
// 2x2 matrix products.
constexpr double kS = 0.70710678118654752440084436210485;

using Vec = std::array<Complex, 2>;
using Mat = std::array<std::array<Complex, 2>, 2>;

Vec oracle_state(int value, int basis) {
  if (basis == 0)
    return value ? Vec{Complex(0.0), Complex(1.0)}
                 : Vec{Complex(1.0), Complex(0.0)};
  return value ? Vec{Complex(kS), Complex(-kS)} : Vec{Complex(kS), Complex(kS)};
}

Mat oracle_matrix(Gate gate) {
  switch (gate) {
    case Gate::Sigma0:
    case Gate::Identity:
      return Mat{{{Complex(1.0), Complex(0.0)}, {Complex(0.0), Complex(1.0)}}};
    case Gate::Sigma1:
      return Mat{{{Complex(0.0), Complex(1.0)}, {Complex(-1.0), Complex(0.0)}}};
    case Gate::Sigma2:
      return Mat{{{Complex(1.0), Complex(0.0)}, {Complex(0.0), Complex(-1.0)}}};
    case Gate::Sigma3:
      return Mat{{{Complex(0.0), Complex(1.0)}, {Complex(1.0), Complex(0.0)}}};
    case Gate::Hadamard:
      return Mat{{{Complex(kS), Complex(kS)}, {Complex(kS), Complex(-kS)}}};
  }
  throw std::logic_error("unreachable");
}

Vec mat_vec(const Mat& m, const Vec& v) {
  return Vec{m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

// squared overlap |<a|b>|^2; 1 means equal up to a global phase
double overlap2(const Vec& a, const Vec& b) {
  const Complex inner = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
  return std::norm(inner);
}

constexpr std::array<Gate, 6> kAllGates = {Gate::Sigma0,   Gate::Sigma1,
                                           Gate::Sigma2,   Gate::Sigma3,
                                           Gate::Hadamard, Gate::Identity};

}  // namespace

TEST_CASE("label arithmetic reproduces the matrix product in all 24 cases") {
  for (const Gate gate : kAllGates)
    for (int value = 0; value < 2; ++value)
      for (int basis = 0; basis < 2; ++basis) {
        const Vec evolved = mat_vec(oracle_matrix(gate), oracle_state(value, basis));

        // the matrix product must land on exactly one labeled state
        int matches = 0;
        StateLabel matched;
        for (int v = 0; v < 2; ++v)
          for (int b = 0; b < 2; ++b)
            if (overlap2(evolved, oracle_state(v, b)) > 1.0 - 1e-12) {
              ++matches;
              matched = StateLabel{static_cast<std::uint8_t>(v),
                                   static_cast<std::uint8_t>(b)};
            }
        REQUIRE(matches == 1);

        const StateLabel in{static_cast<std::uint8_t>(value),
                            static_cast<std::uint8_t>(basis)};
        CHECK(qss::apply_label(in, gate) == matched);
      }
}

TEST_CASE("gate application on state vectors matches the label shortcut") {
  for (const Gate gate : kAllGates)
    for (int value = 0; value < 2; ++value)
      for (int basis = 0; basis < 2; ++basis) {
        const StateLabel in{static_cast<std::uint8_t>(value),
                            static_cast<std::uint8_t>(basis)};
        const QubitState evolved = qss::apply_gate(qss::prepare(in), gate);
        const QubitState relabeled = qss::prepare(qss::apply_label(in, gate));
        CHECK(qss::equal_up_to_phase(evolved, relabeled));
        CHECK(qss::fidelity(evolved, relabeled) ==
              doctest::Approx(1.0).epsilon(1e-12));
      }
}

TEST_CASE("frozen label table entries") {
  using qss::apply_label;
  // value flips: always under sigma1, conjugate-basis-only under sigma2,
  // same-basis-only under sigma3
  CHECK(apply_label({0, 0}, Gate::Sigma1) == StateLabel{1, 0});
  CHECK(apply_label({1, 1}, Gate::Sigma1) == StateLabel{0, 1});
  CHECK(apply_label({0, 0}, Gate::Sigma2) == StateLabel{0, 0});
  CHECK(apply_label({0, 1}, Gate::Sigma2) == StateLabel{1, 1});
  CHECK(apply_label({0, 0}, Gate::Sigma3) == StateLabel{1, 0});
  CHECK(apply_label({0, 1}, Gate::Sigma3) == StateLabel{0, 1});
  CHECK(apply_label({1, 0}, Gate::Hadamard) == StateLabel{1, 1});
  CHECK(apply_label({1, 1}, Gate::Hadamard) == StateLabel{1, 0});
  CHECK(apply_label({1, 0}, Gate::Sigma0) == StateLabel{1, 0});
  CHECK(apply_label({0, 1}, Gate::Identity) == StateLabel{0, 1});
}

TEST_CASE("prepared states expose the advertised amplitudes") {
  CHECK(qss::prepare({0, 0}) == QubitState(1.0, 0.0));
  CHECK(qss::prepare({1, 0}) == QubitState(0.0, 1.0));
  CHECK(qss::prepare({0, 1}) == QubitState(qss::kInvSqrt2, qss::kInvSqrt2));
  CHECK(qss::prepare({1, 1}) == QubitState(qss::kInvSqrt2, -qss::kInvSqrt2));
}

TEST_CASE("outcome probabilities for the four states in both bases") {
  // same-basis readout is deterministic
  CHECK(qss::prob_outcome_one(qss::prepare({0, 0}), Basis::Z) == 0.0);
  CHECK(qss::prob_outcome_one(qss::prepare({1, 0}), Basis::Z) == 1.0);
  CHECK(qss::prob_outcome_one(qss::prepare({0, 1}), Basis::X) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(qss::prob_outcome_one(qss::prepare({1, 1}), Basis::X) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // conjugate-basis readout is an unbiased coin
  CHECK(qss::prob_outcome_one(qss::prepare({0, 0}), Basis::X) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(qss::prob_outcome_one(qss::prepare({1, 0}), Basis::X) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(qss::prob_outcome_one(qss::prepare({0, 1}), Basis::Z) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(qss::prob_outcome_one(qss::prepare({1, 1}), Basis::Z) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("conjugate-basis measurement is a fair coin at 3 sigma") {
  qss::Rng rng(123);
  const QubitState plus = qss::prepare({0, 1});
  int ones = 0;
  constexpr int trials = 10000;
  for (int i = 0; i < trials; ++i) ones += qss::measure(plus, Basis::Z, rng);
  // sd = sqrt(n/4) = 50
  CHECK(std::abs(ones - trials / 2) < 150);
}

TEST_CASE("same-basis measurement never errs") {
  qss::Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    CHECK(qss::measure(qss::prepare({1, 0}), Basis::Z, rng) == 1);
    CHECK(qss::measure(qss::prepare({0, 1}), Basis::X, rng) == 0);
  }
}

TEST_CASE("state construction enforces normalization") {
  CHECK_THROWS_AS(QubitState(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(QubitState(0.0, 0.0), std::invalid_argument);
  CHECK_NOTHROW(QubitState(qss::kInvSqrt2, -qss::kInvSqrt2));
  CHECK_NOTHROW(QubitState(Complex(0.0, 1.0), 0.0));
}

TEST_CASE("phase-insensitive equality") {
  const QubitState plus = qss::prepare({0, 1});
  const QubitState minus_plus(-qss::kInvSqrt2, -qss::kInvSqrt2);
  const QubitState imag_plus(Complex(0.0, qss::kInvSqrt2),
                             Complex(0.0, qss::kInvSqrt2));
  CHECK(qss::equal_up_to_phase(plus, minus_plus));
  CHECK(qss::equal_up_to_phase(plus, imag_plus));
  CHECK_FALSE(qss::equal_up_to_phase(plus, qss::prepare({1, 1})));
  CHECK(qss::fidelity(plus, qss::prepare({1, 1})) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("sigma gates map from operation symbols") {
  CHECK(qss::sigma_gate(0) == Gate::Sigma0);
  CHECK(qss::sigma_gate(1) == Gate::Sigma1);
  CHECK(qss::sigma_gate(2) == Gate::Sigma2);
  CHECK(qss::sigma_gate(3) == Gate::Sigma3);
  CHECK_THROWS_AS(qss::sigma_gate(4), std::invalid_argument);
  CHECK_THROWS_AS(qss::sigma_gate(-1), std::invalid_argument);
}
