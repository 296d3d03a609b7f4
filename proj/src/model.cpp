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

#include "qplay/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "qplay/errors.hpp"
#include "qplay/rng.hpp"

namespace qplay {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

constexpr int kMaxLayers = 64;

} // namespace

std::string_view to_string(Variant v) {
    return v == Variant::Separate ? "separate" : "compact";
}

std::string_view to_string(Entangler e) {
    switch (e) {
    case Entangler::CZ:
        return "cz";
    case Entangler::CNOT:
        return "cnot";
    case Entangler::None:
        break;
    }
    return "none";
}

Variant parse_variant(std::string_view name) {
    const auto n = lower(name);
    if (n == "separate") {
        return Variant::Separate;
    }
    if (n == "compact") {
        return Variant::Compact;
    }
    throw ConfigError("unknown variant '" + std::string(name) + "'");
}

Entangler parse_entangler(std::string_view name) {
    const auto n = lower(name);
    if (n == "cz") {
        return Entangler::CZ;
    }
    if (n == "cnot" || n == "cx") {
        return Entangler::CNOT;
    }
    if (n == "none") {
        return Entangler::None;
    }
    throw ConfigError("unknown entangler '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
    if (n_qubits != 1 && n_qubits != 2) {
        throw ConfigError("n_qubits must be 1 or 2");
    }
    if (n_layers < 1 || n_layers > kMaxLayers) {
        throw ConfigError("n_layers must be in [1, " +
                          std::to_string(kMaxLayers) + "]");
    }
    if (n_classes < 2 || n_classes > 4) {
        throw ConfigError("n_classes must be in [2, 4]");
    }
    if (n_qubits == 1 && entangler != Entangler::None) {
        throw ConfigError("entangler requires two qubits");
    }
}

ParameterSet::ParameterSet(const ModelConfig &config, std::vector<double> values)
    : n_layers_(config.n_layers), n_qubits_(config.n_qubits),
      per_gate_(config.params_per_gate()), values_(std::move(values)) {
    if (values_.size() != config.param_count()) {
        throw DomainError("parameter count " + std::to_string(values_.size()) +
                          " does not match model (" +
                          std::to_string(config.param_count()) + ")");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw DomainError("parameters must be finite");
        }
    }
}

ParameterSet ParameterSet::zeros(const ModelConfig &config) {
    return {config, std::vector<double>(config.param_count(), 0.0)};
}

std::size_t ParameterSet::offset(int layer, int qubit) const {
    return static_cast<std::size_t>((layer * n_qubits_ + qubit) * per_gate_);
}

std::span<const double> ParameterSet::gate(int layer, int qubit) const {
    return std::span<const double>(values_).subspan(
        offset(layer, qubit), static_cast<std::size_t>(per_gate_));
}

std::span<double> ParameterSet::gate(int layer, int qubit) {
    return std::span<double>(values_).subspan(
        offset(layer, qubit), static_cast<std::size_t>(per_gate_));
}

StateVector state_from_bloch(double x, double y, double z) {
    const double polar = std::acos(std::clamp(z, -1.0, 1.0));
    const double azimuth = std::atan2(y, x);
    return StateVector::from_amplitudes(
        1, {Complex{std::cos(polar / 2), 0.0},
            std::polar(std::sin(polar / 2), azimuth)});
}

TargetStateSet target_states(int n_classes, int n_qubits) {
    if (n_classes < 2 || n_classes > 4) {
        throw ConfigError("n_classes must be in [2, 4]");
    }
    if (n_qubits != 1 && n_qubits != 2) {
        throw ConfigError("n_qubits must be 1 or 2");
    }
    TargetStateSet set;
    if (n_qubits == 2) {
        for (int c = 0; c < n_classes; ++c) {
            set.states.push_back(
                StateVector::basis(2, static_cast<std::size_t>(c)));
        }
        return set;
    }
    switch (n_classes) {
    case 2:
        set.states = {StateVector::basis(1, 0), StateVector::basis(1, 1)};
        break;
    case 3:
        for (int c = 0; c < 3; ++c) {
            const double a = 2.0 * std::numbers::pi * c / 3.0;
            set.states.push_back(state_from_bloch(std::sin(a), 0.0, std::cos(a)));
        }
        break;
    default: {
        const double s = 1.0 / std::sqrt(3.0);
        const std::array<std::array<double, 3>, 4> v{
            {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}};
        for (const auto &p : v) {
            set.states.push_back(state_from_bloch(p[0], p[1], p[2]));
        }
    }
    }
    return set;
}

Model::Model(ModelConfig config)
    : Model(config, target_states(config.n_classes, config.n_qubits)) {}

Model::Model(ModelConfig config, TargetStateSet targets)
    : config_(config), targets_(std::move(targets)) {
    config_.validate();
    if (static_cast<int>(targets_.size()) != config_.n_classes) {
        throw ConfigError("target count does not match n_classes");
    }
    for (const auto &t : targets_.states) {
        if (t.n_qubits() != config_.n_qubits) {
            throw ConfigError("target qubit count does not match model");
        }
    }
}

std::pair<Model, ParameterSet> build_model(const ModelConfig &config,
                                           std::uint64_t seed) {
    Model model(config);
    Rng rng(seed);
    std::vector<double> values(config.param_count());
    for (auto &v : values) {
        v = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    return {std::move(model), ParameterSet(config, std::move(values))};
}

Unitary2 layer_unitary(std::span<const double> p, const FeatureVector &x,
                       Variant variant) {
    if (variant == Variant::Separate) {
        // Encoding first, then the trainable rotation.
        return rotation_gate(p[0], p[1], p[2]) *
               rotation_gate(x[0], x[1], x[2]);
    }
    return rotation_gate(p[0] * x[0] + p[3], p[1] * x[1] + p[4],
                         p[2] * x[2] + p[5]);
}

void check_shape(const Model &model, const ParameterSet &params) {
    const auto &c = model.config();
    if (params.n_layers() != c.n_layers || params.n_qubits() != c.n_qubits ||
        params.per_gate() != c.params_per_gate()) {
        throw DomainError("parameter set is not shaped for this model");
    }
}

std::vector<double> class_scores(const Model &model,
                                 const StateVector &final_state) {
    const int n_classes = model.config().n_classes;
    std::vector<double> scores(static_cast<std::size_t>(n_classes));
    if (model.uses_target_readout()) {
        for (int c = 0; c < n_classes; ++c) {
            scores[static_cast<std::size_t>(c)] =
                fidelity(model.targets()[static_cast<std::size_t>(c)],
                         final_state);
        }
        return scores;
    }
    double total = 0.0;
    for (int c = 0; c < n_classes; ++c) {
        scores[static_cast<std::size_t>(c)] =
            std::norm(final_state[static_cast<std::size_t>(c)]);
        total += scores[static_cast<std::size_t>(c)];
    }
    if (total < 1e-12) {
        std::fill(scores.begin(), scores.end(), 1.0 / n_classes);
    } else {
        for (auto &s : scores) {
            s /= total;
        }
    }
    return scores;
}

ForwardTrace forward(const Model &model, const ParameterSet &params,
                     const FeatureVector &x) {
    check_shape(model, params);
    const auto &c = model.config();
    ForwardTrace trace;
    trace.per_layer_states.reserve(static_cast<std::size_t>(c.n_layers));
    StateVector state = new_zero_state(c.n_qubits);
    for (int k = 0; k < c.n_layers; ++k) {
        for (int q = 0; q < c.n_qubits; ++q) {
            state = apply_single_qubit_gate(
                state, layer_unitary(params.gate(k, q), x, c.variant), q);
        }
        if (c.n_qubits == 2 && k + 1 < c.n_layers) {
            if (c.entangler == Entangler::CZ) {
                state = apply_cz(state, 0, 1);
            } else if (c.entangler == Entangler::CNOT) {
                state = apply_cx(state, 0, 1);
            }
        }
        state.renormalize_if_drifted();
        trace.per_layer_states.push_back(state);
    }
    trace.final_state = trace.per_layer_states.back();
    trace.class_scores = class_scores(model, trace.final_state);
    return trace;
}

int argmax_label(std::span<const double> scores) {
    int best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[static_cast<std::size_t>(best)]) {
            best = static_cast<int>(c);
        }
    }
    return best;
}

Prediction predict(const Model &model, const ParameterSet &params,
                   const FeatureVector &x) {
    auto trace = forward(model, params, x);
    const int label = argmax_label(trace.class_scores);
    return {label, std::move(trace.class_scores)};
}

} // namespace qplay
