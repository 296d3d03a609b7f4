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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "oracles.hpp"
#include "qplay/errors.hpp"
#include "qplay/rng.hpp"

namespace qplay {
namespace {

using std::numbers::pi;

ModelConfig config(int qubits, int layers, Variant v,
                   Entangler e = Entangler::None, int classes = 2) {
    return {qubits, layers, v, e, classes};
}

TEST(BuildModel, ParameterCounts) {
    EXPECT_EQ(build_model(config(1, 3, Variant::Compact), 1).second.size(), 18u);
    EXPECT_EQ(build_model(config(2, 4, Variant::Separate, Entangler::CZ), 1)
                  .second.size(),
              24u);
}

TEST(BuildModel, DeterministicAndWithinRange) {
    const auto cfg = config(2, 3, Variant::Compact, Entangler::CNOT, 4);
    const auto a = build_model(cfg, 42).second;
    const auto b = build_model(cfg, 42).second;
    EXPECT_EQ(a, b);
    EXPECT_NE(a, build_model(cfg, 43).second);
    for (double v : a.values()) {
        EXPECT_GE(v, -pi);
        EXPECT_LT(v, pi);
    }
}

TEST(BuildModel, RejectsInvalidConfigs) {
    EXPECT_THROW((void)build_model(config(1, 2, Variant::Compact, Entangler::CZ), 0),
                 ConfigError);
    EXPECT_THROW((void)build_model(config(3, 2, Variant::Compact), 0), ConfigError);
    EXPECT_THROW((void)build_model(config(1, 0, Variant::Compact), 0), ConfigError);
    EXPECT_THROW((void)build_model(config(1, 1, Variant::Compact, Entangler::None, 5), 0),
                 ConfigError);
}

TEST(TargetStates, TwoClassesOneQubitArePoles) {
    const auto t = target_states(2, 1);
    ASSERT_EQ(t.size(), 2u);
    EXPECT_EQ(t[0], StateVector::basis(1, 0));
    EXPECT_EQ(t[1], StateVector::basis(1, 1));
    EXPECT_NEAR(fidelity(t[0], t[1]), 0.0, 1e-15);
}

TEST(TargetStates, TwoQubitsAreBasisStates) {
    const auto t = target_states(4, 2);
    for (std::size_t c = 0; c < 4; ++c) {
        EXPECT_EQ(t[c], StateVector::basis(2, c));
    }
}

TEST(TargetStates, ThreeClassesAreAt120Degrees) {
    const auto t = target_states(3, 1);
    // F = (1 + cos gamma) / 2 for Bloch vectors separated by gamma.
    const double want = (1 + std::cos(2 * pi / 3)) / 2;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            EXPECT_NEAR(fidelity(t[i], t[j]), want, 1e-12);
}

TEST(TargetStates, FourClassesTetrahedron) {
    const auto t = target_states(4, 1);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
            EXPECT_NEAR(fidelity(t[i], t[j]), 1.0 / 3, 1e-12);
            EXPECT_LE(fidelity(t[i], t[j]), 0.5 + 1e-9);
        }
    EXPECT_THROW((void)target_states(1, 1), ConfigError);
    EXPECT_THROW((void)target_states(5, 2), ConfigError);
}

TEST(LayerUnitary, CompactZeroIsIdentity) {
    const std::vector<double> p(6, 0.0);
    const auto u = layer_unitary(p, {0.3, -1.2, 0.7}, Variant::Compact);
    EXPECT_LT(std::abs(u(0, 0) - 1.0) + std::abs(u(1, 1) - 1.0) +
                  std::abs(u(0, 1)) + std::abs(u(1, 0)),
              1e-15);
}

TEST(LayerUnitary, CompactScalesInputs) {
    const std::vector<double> p{0, 1, 0, 0, 0, 0};
    const auto u = layer_unitary(p, {0, pi, 0}, Variant::Compact);
    const auto o = oracle::rot(0, pi, 0);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            EXPECT_NEAR(std::abs(u(r, c) - o[r][c]), 0.0, 1e-15);
    const auto s = apply_single_qubit_gate(new_zero_state(1), u, 0);
    EXPECT_NEAR(std::norm(s[1]), 1.0, 1e-15);
}

TEST(LayerUnitary, SeparateWithZeroAnglesIsEncodingOnly) {
    const std::vector<double> p(3, 0.0);
    const FeatureVector x{0.4, -0.9, 1.1};
    const auto u = layer_unitary(p, x, Variant::Separate);
    const auto enc = rotation_gate(x[0], x[1], x[2]);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            EXPECT_NEAR(std::abs(u(r, c) - enc(r, c)), 0.0, 1e-15);
}

TEST(LayerUnitary, CompactUnitWeightsMatchesSeparateEncoding) {
    const FeatureVector x{0.2, 0.5, -0.3};
    const auto compact = layer_unitary(std::vector<double>{1, 1, 1, 0, 0, 0}, x,
                                       Variant::Compact);
    const auto separate =
        layer_unitary(std::vector<double>{0, 0, 0}, x, Variant::Separate);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            EXPECT_NEAR(std::abs(compact(r, c) - separate(r, c)), 0.0, 1e-15);
}

TEST(Forward, IdentityCircuitStaysAtZero) {
    for (int nq : {1, 2}) {
        const auto cfg = config(nq, 1, Variant::Compact,
                                nq == 2 ? Entangler::CZ : Entangler::None);
        const Model m(cfg);
        const auto tr = forward(m, ParameterSet::zeros(cfg), {0.7, -0.2, 0});
        ASSERT_EQ(tr.per_layer_states.size(), 1u);
        EXPECT_EQ(tr.final_state, new_zero_state(nq));
    }
}

TEST(Forward, SeparateEncodingFlipsToOne) {
    const auto cfg = config(1, 1, Variant::Separate);
    const Model m(cfg);
    const auto tr = forward(m, ParameterSet::zeros(cfg), {0, pi, 0});
    EXPECT_NEAR(std::norm(tr.final_state[1]), 1.0, 1e-15);
    EXPECT_NEAR(tr.class_scores[1], 1.0, 1e-15);
}

TEST(Forward, TwoQubitTraceStructure) {
    const auto cfg = config(2, 2, Variant::Compact, Entangler::CZ, 4);
    const auto [m, p] = build_model(cfg, 7);
    const auto tr = forward(m, p, {0.1, 0.2, 0});
    ASSERT_EQ(tr.per_layer_states.size(), 2u);
    for (const auto &s : tr.per_layer_states) {
        EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
    }
    EXPECT_EQ(tr.per_layer_states.back(), tr.final_state);
    double sum = 0;
    for (double s : tr.class_scores) sum += s;
    EXPECT_NEAR(sum, 1.0, 1e-10);
}

TEST(Forward, RejectsMisshapedParameters) {
    const auto cfg = config(1, 2, Variant::Compact);
    const Model m(cfg);
    EXPECT_THROW((void)forward(m, ParameterSet::zeros(config(1, 3, Variant::Compact)),
                               {0, 0, 0}),
                 DomainError);
    EXPECT_THROW(ParameterSet(cfg, std::vector<double>(5)), DomainError);
}

// Depth composition against dense matrices for N <= 6, n <= 2.
TEST(Forward, MatchesDenseCircuitOracle) {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int nq = 1 + static_cast<int>(rng.below(2));
        const int layers = 1 + static_cast<int>(rng.below(6));
        const auto variant = rng.below(2) ? Variant::Separate : Variant::Compact;
        const auto ent = nq == 1 ? Entangler::None
                                 : (rng.below(2) ? Entangler::CZ : Entangler::CNOT);
        const auto cfg = config(nq, layers, variant, ent, nq == 2 ? 4 : 2);
        const auto [m, p] = build_model(cfg, rng.below(1000));
        const FeatureVector x{rng.uniform(-1, 1), rng.uniform(-1, 1), 0};
        const auto tr = forward(m, p, x);
        const auto want = oracle::reupload_state(cfg, p.values(), x);
        EXPECT_LT(oracle::max_dev(tr.final_state.amplitudes(), want), 1e-10);
    }
}

TEST(Forward, TwoQubitEntanglerOnlyBetweenLayers) {
    // With one layer no entangler is applied, so CZ and CNOT agree.
    auto a = config(2, 1, Variant::Compact, Entangler::CZ, 4);
    auto b = config(2, 1, Variant::Compact, Entangler::CNOT, 4);
    const auto pa = build_model(a, 5).second;
    const ParameterSet pb(b, {pa.values().begin(), pa.values().end()});
    const FeatureVector x{0.3, 0.8, 0};
    EXPECT_EQ(forward(Model(a), pa, x).final_state,
              forward(Model(b), pb, x).final_state);
}

TEST(Predict, ArgmaxWithLowestIndexTieBreak) {
    EXPECT_EQ(argmax_label(std::vector<double>{0.9, 0.1}), 0);
    EXPECT_EQ(argmax_label(std::vector<double>{0.5, 0.5}), 0);
    EXPECT_EQ(argmax_label(std::vector<double>{0.1, 0.2, 0.2, 0.5}), 3);
}

TEST(Predict, BasisStateTenIsClassTwo) {
    const auto cfg = config(2, 1, Variant::Compact, Entangler::CZ, 4);
    const Model m(cfg);
    const auto scores = class_scores(m, StateVector::basis(2, 2));
    EXPECT_EQ(argmax_label(scores), 2);
}

TEST(Predict, MarginalizationRenormalizesAndGuardsZero) {
    const auto cfg = config(2, 1, Variant::Compact, Entangler::CZ, 2);
    const Model m(cfg);
    const double h = 0.5;
    const auto s = StateVector::from_amplitudes(2, {h, h, h, h});
    const auto sc = class_scores(m, s);
    EXPECT_NEAR(sc[0], 0.5, 1e-15);
    EXPECT_NEAR(sc[1], 0.5, 1e-15);
    const auto deg = class_scores(m, StateVector::basis(2, 3));
    EXPECT_EQ(deg, (std::vector<double>{0.5, 0.5}));
}

TEST(Predict, SwappingTargetsSwapsScores) {
    const auto cfg = config(1, 2, Variant::Compact, Entangler::None, 3);
    auto targets = target_states(3, 1);
    const Model m(cfg, targets);
    std::swap(targets.states[0], targets.states[2]);
    const Model swapped(cfg, targets);
    const auto p = build_model(cfg, 3).second;
    const FeatureVector x{0.5, -0.5, 0};
    const auto a = forward(m, p, x).class_scores;
    const auto b = forward(swapped, p, x).class_scores;
    EXPECT_DOUBLE_EQ(a[0], b[2]);
    EXPECT_DOUBLE_EQ(a[2], b[0]);
    EXPECT_DOUBLE_EQ(a[1], b[1]);
}

} // namespace
} // namespace qplay
