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

#include "qplay/viz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qplay/datasets.hpp"
#include "qplay/errors.hpp"
#include "qplay/rng.hpp"

namespace qplay {

namespace {

Vec3 sub(const Vec3 &a, const Vec3 &b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

double triple(const Vec3 &a, const Vec3 &b, const Vec3 &c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) -
           a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

double phase_hue(std::span<const Complex> amps) {
    constexpr double kZero = 1e-12;
    std::size_t first = amps.size();
    std::size_t largest = 0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        if (first == amps.size() && std::abs(amps[k]) > kZero) {
            first = k;
        }
        if (std::abs(amps[k]) > std::abs(amps[largest]) + kZero) {
            largest = k;
        }
    }
    if (first == amps.size()) {
        return 0.0;
    }
    double hue = std::arg(amps[largest]) - std::arg(amps[first]);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    hue = std::fmod(hue, two_pi);
    if (hue < 0.0) {
        hue += two_pi;
    }
    // fmod can round up to exactly 2 pi for tiny negative inputs.
    return hue >= two_pi ? 0.0 : hue;
}

} // namespace

std::vector<std::size_t> display_subset(std::size_t n, std::uint64_t seed,
                                        std::size_t limit) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (n <= limit) {
        return idx;
    }
    Rng rng(derive_seed(seed, 3));
    shuffle(idx.begin(), idx.end(), rng);
    idx.resize(limit);
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::array<Vec3, 4> default_simplex_vertices() {
    const double s = 1.0 / std::sqrt(3.0);
    return {{{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}}};
}

Vec3 bloch_coordinates(const StateVector &state) {
    if (state.n_qubits() != 1) {
        throw DomainError("Bloch coordinates need a single-qubit state");
    }
    const Complex a = state[0];
    const Complex b = state[1];
    const Complex ab = std::conj(a) * b;
    return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
}

SimplexPoint simplex_coordinates(const StateVector &state,
                                 const std::array<Vec3, 4> &vertices) {
    if (state.n_qubits() != 2) {
        throw DomainError("Q-simplex coordinates need a two-qubit state");
    }
    const double volume =
        triple(sub(vertices[1], vertices[0]), sub(vertices[2], vertices[0]),
               sub(vertices[3], vertices[0]));
    if (std::abs(volume) < 1e-12) {
        throw ConfigError("simplex vertices are affinely dependent");
    }
    SimplexPoint pt;
    const auto probs = probabilities(state);
    for (std::size_t k = 0; k < 4; ++k) {
        pt.weights[k] = probs[k];
        for (std::size_t d = 0; d < 3; ++d) {
            pt.p[d] += probs[k] * vertices[k][d];
        }
    }
    pt.concurrence_size = concurrence(state);
    pt.phase_hue = phase_hue(state.amplitudes());
    return pt;
}

std::vector<PointCloud> layer_point_clouds(std::span<const ForwardTrace> traces,
                                           std::span<const int> labels,
                                           std::span<const int> predictions,
                                           std::uint64_t seed,
                                           std::size_t limit) {
    if (labels.size() != traces.size() || predictions.size() != traces.size()) {
        throw DomainError("traces, labels and predictions differ in length");
    }
    if (traces.empty()) {
        return {};
    }
    const std::size_t depth = traces.front().per_layer_states.size();
    const int width = traces.front().final_state.n_qubits();
    for (const auto &t : traces) {
        if (t.per_layer_states.size() != depth ||
            t.final_state.n_qubits() != width) {
            throw DomainError("traces differ in depth or qubit count");
        }
    }
    const auto subset = display_subset(traces.size(), seed, limit);
    std::vector<PointCloud> clouds;
    clouds.reserve(depth);
    for (std::size_t layer = 0; layer < depth; ++layer) {
        if (width == 1) {
            std::vector<BlochPoint> pts;
            pts.reserve(subset.size());
            for (auto i : subset) {
                pts.push_back({bloch_coordinates(traces[i].per_layer_states[layer]),
                               labels[i], labels[i] == predictions[i]});
            }
            clouds.emplace_back(std::move(pts));
        } else {
            std::vector<SimplexPoint> pts;
            pts.reserve(subset.size());
            for (auto i : subset) {
                auto p = simplex_coordinates(traces[i].per_layer_states[layer]);
                p.class_label = labels[i];
                p.correct = labels[i] == predictions[i];
                pts.push_back(p);
            }
            clouds.emplace_back(std::move(pts));
        }
    }
    return clouds;
}

DecisionGrid decision_grid(const Model &model, const ParameterSet &params,
                           int resolution) {
    if (resolution < 8 || resolution > 200) {
        throw ConfigError("grid resolution must be in [8, 200]");
    }
    DecisionGrid grid;
    grid.resolution = resolution;
    const auto cells = static_cast<std::size_t>(resolution * resolution);
    grid.labels.reserve(cells);
    grid.scores.reserve(cells);
    for (int row = 0; row < resolution; ++row) {
        const double y = grid_coordinate(row, resolution);
        for (int col = 0; col < resolution; ++col) {
            const auto pred = predict(
                model, params, {grid_coordinate(col, resolution), y, 0.0});
            grid.labels.push_back(pred.label);
            grid.scores.push_back(pred.scores[static_cast<std::size_t>(pred.label)]);
        }
    }
    return grid;
}

} // namespace qplay
