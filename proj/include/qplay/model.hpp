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
 * @file model.hpp
 * Data re-uploading classifier on one or two qubits.
 *
 * Every layer re-encodes the feature vector x through a general rotation
 * R(phi, theta, omega) = RZ(omega) RY(theta) RZ(phi) on each qubit:
 *
 *  - Separate: L(k) = R(theta_k) R(x), the encoding gate first.
 *  - Compact:  L(k) = R(w_k o x + b_k), one gate with effective angles.
 *
 * In the two-qubit model an entangler (CZ or CNOT, control qubit 0) follows
 * every layer except the last one.
 */
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qplay/qstate.hpp"

namespace qplay {

enum class Variant { Separate, Compact };
enum class Entangler { None, CZ, CNOT };

[[nodiscard]] std::string_view to_string(Variant v);
[[nodiscard]] std::string_view to_string(Entangler e);
/// Case-insensitive; throws ConfigError on unknown names.
[[nodiscard]] Variant parse_variant(std::string_view name);
[[nodiscard]] Entangler parse_entangler(std::string_view name);

struct ModelConfig {
    int n_qubits = 1;
    int n_layers = 1;
    Variant variant = Variant::Compact;
    Entangler entangler = Entangler::None;
    int n_classes = 2;

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;

    [[nodiscard]] int params_per_gate() const {
        return variant == Variant::Separate ? 3 : 6;
    }
    [[nodiscard]] std::size_t param_count() const {
        return static_cast<std::size_t>(params_per_gate() * n_layers *
                                        n_qubits);
    }

    friend bool operator==(const ModelConfig &, const ModelConfig &) = default;
};

/// Three input angles; 2D samples (x, y) are padded to (x, y, 0).
using FeatureVector = std::array<double, 3>;

/// Trainable parameters, flattened as [layer][qubit][slot]. A Separate gate
/// has slots (theta0, theta1, theta2); a Compact gate has three weights
/// followed by three biases.
class ParameterSet {
  public:
    ParameterSet() = default;
    ParameterSet(const ModelConfig &config, std::vector<double> values);

    static ParameterSet zeros(const ModelConfig &config);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept {
        return values_;
    }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }

    [[nodiscard]] std::size_t offset(int layer, int qubit) const;
    /// The slots of one gate.
    [[nodiscard]] std::span<const double> gate(int layer, int qubit) const;
    [[nodiscard]] std::span<double> gate(int layer, int qubit);

    [[nodiscard]] int n_layers() const noexcept { return n_layers_; }
    [[nodiscard]] int n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] int per_gate() const noexcept { return per_gate_; }

    friend bool operator==(const ParameterSet &,
                           const ParameterSet &) = default;

  private:
    int n_layers_ = 0;
    int n_qubits_ = 0;
    int per_gate_ = 0;
    std::vector<double> values_;
};

struct TargetStateSet {
    std::vector<StateVector> states;

    [[nodiscard]] std::size_t size() const noexcept { return states.size(); }
    [[nodiscard]] const StateVector &operator[](std::size_t c) const {
        return states[c];
    }
};

/// One qubit: 2 classes at the poles, 3 classes 120 degrees apart in the x-z
/// plane, 4 classes at tetrahedron vertices. Two qubits: class c -> |c>.
[[nodiscard]] TargetStateSet target_states(int n_classes, int n_qubits);

/// Single-qubit state with the given Bloch vector (unit length expected).
[[nodiscard]] StateVector state_from_bloch(double x, double y, double z);

class Model {
  public:
    explicit Model(ModelConfig config);
    Model(ModelConfig config, TargetStateSet targets);

    [[nodiscard]] const ModelConfig &config() const noexcept {
        return config_;
    }
    [[nodiscard]] const TargetStateSet &targets() const noexcept {
        return targets_;
    }
    /// Targets are used as class readout on one qubit; two-qubit models read
    /// out basis-state probabilities instead.
    [[nodiscard]] bool uses_target_readout() const noexcept {
        return config_.n_qubits == 1;
    }

  private:
    ModelConfig config_;
    TargetStateSet targets_;
};

/// Validates `config` and draws every parameter from U(-pi, pi).
[[nodiscard]] std::pair<Model, ParameterSet> build_model(
    const ModelConfig &config, std::uint64_t seed);

/// The single-qubit unitary of one layer for one qubit.
[[nodiscard]] Unitary2 layer_unitary(std::span<const double> gate_params,
                                     const FeatureVector &x, Variant variant);

struct ForwardTrace {
    /// State after each layer, entangler included.
    std::vector<StateVector> per_layer_states;
    StateVector final_state{1};
    std::vector<double> class_scores;
};

[[nodiscard]] ForwardTrace forward(const Model &model,
                                   const ParameterSet &params,
                                   const FeatureVector &x);

/// Fidelities to the targets (one qubit) or renormalized probabilities of
/// the first n_classes basis states (two qubits, uniform when they all
/// vanish).
[[nodiscard]] std::vector<double> class_scores(const Model &model,
                                               const StateVector &final_state);

/// Index of the largest score; ties go to the lowest index.
[[nodiscard]] int argmax_label(std::span<const double> scores);

struct Prediction {
    int label = 0;
    std::vector<double> scores;
};

[[nodiscard]] Prediction predict(const Model &model, const ParameterSet &params,
                                 const FeatureVector &x);

/// Throws DomainError when `params` is not shaped for `model`.
void check_shape(const Model &model, const ParameterSet &params);

} // namespace qplay
