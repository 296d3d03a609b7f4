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
 * @file viz.hpp
 * Render-ready geometry: Bloch vectors for one qubit, Q-simplex points for
 * two qubits, per-layer point clouds and decision grids.
 *
 * The Q-simplex places the measurement distribution (P00, P01, P10, P11) as
 * barycentric weights on a tetrahedron whose vertices are the basis states.
 * Bell states land on midpoints of the |00>-|11> and |01>-|10> edges.
 */
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "qplay/model.hpp"

namespace qplay {

using Vec3 = std::array<double, 3>;

/// Regular tetrahedron assigned to |00>, |01>, |10>, |11> in order.
[[nodiscard]] std::array<Vec3, 4> default_simplex_vertices();

/// (2 Re(conj(a) b), 2 Im(conj(a) b), |a|^2 - |b|^2).
[[nodiscard]] Vec3 bloch_coordinates(const StateVector &state);

struct BlochPoint {
    Vec3 xyz{};
    int class_label = 0;
    bool correct = false;
};

struct SimplexPoint {
    Vec3 p{};
    /// Measurement probabilities, used as barycentric weights.
    std::array<double, 4> weights{};
    double concurrence_size = 0.0;
    /// Phase of the largest amplitude after rotating the first nonzero
    /// amplitude onto the positive real axis, in [0, 2 pi).
    double phase_hue = 0.0;
    int class_label = 0;
    bool correct = false;
};

/// Throws ConfigError when the vertices are affinely dependent.
[[nodiscard]] SimplexPoint simplex_coordinates(
    const StateVector &state,
    const std::array<Vec3, 4> &vertices = default_simplex_vertices());

using PointCloud = std::variant<std::vector<BlochPoint>,
                                std::vector<SimplexPoint>>;

inline constexpr std::size_t kDisplayPointLimit = 200;

/// Indices of the points shown for a cloud of n: all of them when n <= limit,
/// otherwise a seeded subset of size limit in increasing order.
[[nodiscard]] std::vector<std::size_t> display_subset(std::size_t n,
                                                      std::uint64_t seed,
                                                      std::size_t limit);

/// One cloud per layer. When there are more than `limit` traces, the same
/// seeded subset (kept in input order) is drawn for every layer. Throws
/// DomainError for traces of mixed depth or width.
[[nodiscard]] std::vector<PointCloud> layer_point_clouds(
    std::span<const ForwardTrace> traces, std::span<const int> labels,
    std::span<const int> predictions, std::uint64_t seed = 0,
    std::size_t limit = kDisplayPointLimit);

/// Row-major grid over [-1.2, 1.2]^2 evaluated at cell centres, rows
/// ordered by increasing y.
struct DecisionGrid {
    int resolution = 0;
    std::vector<int> labels;
    std::vector<double> scores;
};

inline constexpr int kDefaultGridResolution = 40;

/// Throws ConfigError unless 8 <= resolution <= 200.
[[nodiscard]] DecisionGrid decision_grid(const Model &model,
                                         const ParameterSet &params,
                                         int resolution);

} // namespace qplay
