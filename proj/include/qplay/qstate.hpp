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

/**
 * @file qstate.hpp
 * Dense state-vector simulator for up to four qubits.
 *
 * Qubit 0 is the most significant bit of the basis label, so for two qubits
 * the amplitudes are ordered (|00>, |01>, |10>, |11>) with q0 written first.
 * All operations are pure: they take states by const reference and return
 * new values.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace qplay {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 4;

/// Row-major 2x2 complex matrix. Gates built by rotation_gate() are unitary;
/// derivative matrices used during back-propagation are not.
struct Mat2 {
    std::array<Complex, 4> m{};

    [[nodiscard]] constexpr Complex operator()(int r, int c) const {
        return m[static_cast<std::size_t>(2 * r + c)];
    }
    [[nodiscard]] Complex &operator()(int r, int c) {
        return m[static_cast<std::size_t>(2 * r + c)];
    }

    [[nodiscard]] static Mat2 identity() { return {{1.0, 0.0, 0.0, 1.0}}; }
    [[nodiscard]] Mat2 adjoint() const;
    [[nodiscard]] Mat2 operator*(const Mat2 &rhs) const;
    [[nodiscard]] Mat2 operator*(Complex s) const;
    [[nodiscard]] Mat2 operator+(const Mat2 &rhs) const;

    /// max |U U^dagger - I| over the four entries.
    [[nodiscard]] double unitarity_error() const;
};

using Unitary2 = Mat2;

namespace gates {
[[nodiscard]] Mat2 pauli_x();
[[nodiscard]] Mat2 pauli_y();
[[nodiscard]] Mat2 pauli_z();
[[nodiscard]] Mat2 hadamard();
/// exp(-i theta Y / 2)
[[nodiscard]] Mat2 ry(double theta);
/// exp(-i lambda Z / 2)
[[nodiscard]] Mat2 rz(double lambda);
} // namespace gates

/// R(phi, theta, omega) = RZ(omega) RY(theta) RZ(phi).
[[nodiscard]] Unitary2 rotation_gate(double phi, double theta, double omega);

class StateVector {
  public:
    /// |0...0> on n_qubits qubits.
    explicit StateVector(int n_qubits);

    /// Throws DomainError when the length is not 2^n, an amplitude is not
    /// finite, or the squared norm differs from 1 by more than 1e-10.
    static StateVector from_amplitudes(int n_qubits,
                                       std::vector<Complex> amplitudes);

    /// Computational basis state |index>.
    static StateVector basis(int n_qubits, std::size_t index);

    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const noexcept { return amps_.size(); }
    [[nodiscard]] std::span<const Complex> amplitudes() const noexcept {
        return amps_;
    }
    [[nodiscard]] Complex operator[](std::size_t k) const { return amps_[k]; }

    [[nodiscard]] double norm_squared() const;

    /// Rescales to unit norm only when | |psi|^2 - 1 | > 1e-8.
    void renormalize_if_drifted();

    friend bool operator==(const StateVector &, const StateVector &) = default;

  private:
    StateVector(int n_qubits, std::vector<Complex> amps)
        : n_qubits_(n_qubits), amps_(std::move(amps)) {}

    friend StateVector apply_single_qubit_gate(const StateVector &,
                                               const Unitary2 &, int);
    friend StateVector apply_cx(const StateVector &, int, int);
    friend StateVector apply_cz(const StateVector &, int, int);

    int n_qubits_;
    std::vector<Complex> amps_;
};

[[nodiscard]] StateVector new_zero_state(int n_qubits);

/// Applies U to `target`. Throws IndexError for an out-of-range target and
/// DomainError when `gate` is not unitary within 1e-10.
[[nodiscard]] StateVector apply_single_qubit_gate(const StateVector &state,
                                                  const Unitary2 &gate,
                                                  int target);

[[nodiscard]] StateVector apply_cx(const StateVector &state, int control,
                                   int target);

/// Symmetric in control and target.
[[nodiscard]] StateVector apply_cz(const StateVector &state, int control,
                                   int target);

[[nodiscard]] std::vector<double> probabilities(const StateVector &state);

/// |<a|b>|^2
[[nodiscard]] double fidelity(const StateVector &a, const StateVector &b);

/// 2 |ad - bc| for a two-qubit state a|00> + b|01> + c|10> + d|11>.
[[nodiscard]] double concurrence(const StateVector &state);

/// In-place kernels over raw amplitude buffers. They accept any 2x2 matrix
/// and perform no validation; the reverse-mode gradient code relies on
/// them for derivative matrices and adjoint sweeps.
namespace kernels {
void apply_1q(std::span<Complex> amps, int n_qubits, int target,
              const Mat2 &m);
void apply_cx(std::span<Complex> amps, int n_qubits, int control, int target);
void apply_cz(std::span<Complex> amps, int n_qubits, int q0, int q1);
/// <a|b>
[[nodiscard]] Complex inner(std::span<const Complex> a,
                            std::span<const Complex> b);
} // namespace kernels

} // namespace qplay
