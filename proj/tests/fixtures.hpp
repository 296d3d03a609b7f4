// Copyright 2026 The QML Playground Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qplay/qstate.hpp"
#include "qplay/rng.hpp"

namespace qplay::fixtures {

/// Three-qubit W-state preparation from RY, CNOT and X:
///   RY(2 acos(1/sqrt 3)) on q0, controlled-RY(pi/2) q0 -> q1 (as
///   RY(pi/4), CX, RY(-pi/4), CX), CX q1 -> q2, CX q0 -> q1, X on q0.
inline StateVector w_state_circuit() {
    const double pi = std::numbers::pi;
    StateVector s = new_zero_state(3);
    s = apply_single_qubit_gate(s, gates::ry(2 * std::acos(1 / std::sqrt(3.0))), 0);
    s = apply_single_qubit_gate(s, gates::ry(pi / 4), 1);
    s = apply_cx(s, 0, 1);
    s = apply_single_qubit_gate(s, gates::ry(-pi / 4), 1);
    s = apply_cx(s, 0, 1);
    s = apply_cx(s, 1, 2);
    s = apply_cx(s, 0, 1);
    s = apply_single_qubit_gate(s, gates::pauli_x(), 0);
    return s;
}

inline StateVector random_state(int n, Rng &rng) {
    std::vector<Complex> a(std::size_t{1} << n);
    double norm = 0.0;
    for (auto &c : a) {
        c = {rng.normal(), rng.normal()};
        norm += std::norm(c);
    }
    for (auto &c : a) {
        c /= std::sqrt(norm);
    }
    return StateVector::from_amplitudes(n, std::move(a));
}

/// Tensor product a (x) b of two single-qubit states, a on qubit 0.
inline StateVector product_state(const StateVector &a, const StateVector &b) {
    return StateVector::from_amplitudes(
        2, {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]});
}

inline std::vector<StateVector> bell_states() {
    const double s = 1 / std::sqrt(2.0);
    return {StateVector::from_amplitudes(2, {s, 0, 0, s}),
            StateVector::from_amplitudes(2, {s, 0, 0, -s}),
            StateVector::from_amplitudes(2, {0, s, s, 0}),
            StateVector::from_amplitudes(2, {0, s, -s, 0})};
}

} // namespace qplay::fixtures
