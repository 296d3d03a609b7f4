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

#include "qplay/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qplay/errors.hpp"

namespace qplay {

namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kUnitaryTolerance = 1e-10;
constexpr double kDriftTolerance = 1e-8;

void check_qubit_count(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("qubit count must be in [1, " +
                          std::to_string(kMaxQubits) + "], got " +
                          std::to_string(n_qubits));
    }
}

void check_index(const StateVector &state, int q, const char *what) {
    if (q < 0 || q >= state.n_qubits()) {
        throw IndexError(std::string(what) + " qubit " + std::to_string(q) +
                         " out of range for " +
                         std::to_string(state.n_qubits()) + "-qubit state");
    }
}

// Bit position of qubit q in the basis index (qubit 0 is the MSB).
constexpr std::size_t bit_of(int n_qubits, int q) {
    return std::size_t{1} << static_cast<unsigned>(n_qubits - 1 - q);
}

} // namespace

Mat2 Mat2::adjoint() const {
    return {{std::conj(m[0]), std::conj(m[2]), std::conj(m[1]),
             std::conj(m[3])}};
}

Mat2 Mat2::operator*(const Mat2 &rhs) const {
    const auto &a = m;
    const auto &b = rhs.m;
    return {{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
             a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]}};
}

Mat2 Mat2::operator*(Complex s) const {
    return {{m[0] * s, m[1] * s, m[2] * s, m[3] * s}};
}

Mat2 Mat2::operator+(const Mat2 &rhs) const {
    return {{m[0] + rhs.m[0], m[1] + rhs.m[1], m[2] + rhs.m[2],
             m[3] + rhs.m[3]}};
}

double Mat2::unitarity_error() const {
    const Mat2 p = *this * adjoint();
    const Mat2 id = identity();
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        err = std::max(err, std::abs(p.m[i] - id.m[i]));
    }
    return err;
}

namespace gates {

Mat2 pauli_x() { return {{0.0, 1.0, 1.0, 0.0}}; }
Mat2 pauli_y() { return {{0.0, Complex{0, -1}, Complex{0, 1}, 0.0}}; }
Mat2 pauli_z() { return {{1.0, 0.0, 0.0, -1.0}}; }
Mat2 hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    return {{s, s, s, -s}};
}

Mat2 ry(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    return {{c, -s, s, c}};
}

Mat2 rz(double lambda) {
    return {{std::polar(1.0, -lambda / 2), 0.0, 0.0,
             std::polar(1.0, lambda / 2)}};
}

} // namespace gates

Unitary2 rotation_gate(double phi, double theta, double omega) {
    if (!std::isfinite(phi) || !std::isfinite(theta) || !std::isfinite(omega)) {
        throw DomainError("rotation_gate: angles must be finite");
    }
    return gates::rz(omega) * gates::ry(theta) * gates::rz(phi);
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    check_qubit_count(n_qubits);
    amps_.assign(std::size_t{1} << n_qubits, Complex{});
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(int n_qubits,
                                         std::vector<Complex> amplitudes) {
    check_qubit_count(n_qubits);
    if (amplitudes.size() != (std::size_t{1} << n_qubits)) {
        throw DomainError("amplitude count " +
                          std::to_string(amplitudes.size()) +
                          " does not match 2^" + std::to_string(n_qubits));
    }
    double norm = 0.0;
    for (const auto &a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw DomainError("amplitudes must be finite");
        }
        norm += std::norm(a);
    }
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw DomainError("state is not normalized: |psi|^2 = " +
                          std::to_string(norm));
    }
    return {n_qubits, std::move(amplitudes)};
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim()) {
        throw IndexError("basis index out of range");
    }
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
}

double StateVector::norm_squared() const {
    double n = 0.0;
    for (const auto &a : amps_) {
        n += std::norm(a);
    }
    return n;
}

void StateVector::renormalize_if_drifted() {
    const double n = norm_squared();
    if (std::abs(n - 1.0) > kDriftTolerance && n > 0.0) {
        const double scale = 1.0 / std::sqrt(n);
        for (auto &a : amps_) {
            a *= scale;
        }
    }
}

StateVector new_zero_state(int n_qubits) { return StateVector(n_qubits); }

StateVector apply_single_qubit_gate(const StateVector &state,
                                    const Unitary2 &gate, int target) {
    check_index(state, target, "target");
    if (gate.unitarity_error() > kUnitaryTolerance) {
        throw DomainError("apply_single_qubit_gate: gate is not unitary");
    }
    StateVector out = state;
    kernels::apply_1q(out.amps_, out.n_qubits_, target, gate);
    return out;
}

StateVector apply_cx(const StateVector &state, int control, int target) {
    check_index(state, control, "control");
    check_index(state, target, "target");
    if (control == target) {
        throw ConfigError("apply_cx: control and target must differ");
    }
    StateVector out = state;
    kernels::apply_cx(out.amps_, out.n_qubits_, control, target);
    return out;
}

StateVector apply_cz(const StateVector &state, int control, int target) {
    check_index(state, control, "control");
    check_index(state, target, "target");
    if (control == target) {
        throw ConfigError("apply_cz: control and target must differ");
    }
    StateVector out = state;
    kernels::apply_cz(out.amps_, out.n_qubits_, control, target);
    return out;
}

std::vector<double> probabilities(const StateVector &state) {
    std::vector<double> p;
    p.reserve(state.dim());
    for (const auto &a : state.amplitudes()) {
        p.push_back(std::norm(a));
    }
    return p;
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw DomainError("fidelity: qubit counts differ");
    }
    const double f = std::norm(kernels::inner(a.amplitudes(), b.amplitudes()));
    return std::clamp(f, 0.0, 1.0);
}

double concurrence(const StateVector &state) {
    if (state.n_qubits() != 2) {
        throw DomainError("concurrence is defined for two-qubit states only");
    }
    const auto a = state.amplitudes();
    return std::min(1.0, 2.0 * std::abs(a[0] * a[3] - a[1] * a[2]));
}

namespace kernels {

void apply_1q(std::span<Complex> amps, int n_qubits, int target,
              const Mat2 &m) {
    const std::size_t bit = bit_of(n_qubits, target);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & bit) != 0) {
            continue;
        }
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | bit];
        amps[i] = m.m[0] * a0 + m.m[1] * a1;
        amps[i | bit] = m.m[2] * a0 + m.m[3] * a1;
    }
}

void apply_cx(std::span<Complex> amps, int n_qubits, int control,
              int target) {
    const std::size_t cbit = bit_of(n_qubits, control);
    const std::size_t tbit = bit_of(n_qubits, target);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cbit) != 0 && (i & tbit) == 0) {
            std::swap(amps[i], amps[i | tbit]);
        }
    }
}

void apply_cz(std::span<Complex> amps, int n_qubits, int q0, int q1) {
    const std::size_t mask = bit_of(n_qubits, q0) | bit_of(n_qubits, q1);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & mask) == mask) {
            amps[i] = -amps[i];
        }
    }
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    Complex acc{};
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

} // namespace kernels

} // namespace qplay
