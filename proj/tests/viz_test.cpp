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

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "fixtures.hpp"
#include "qplay/errors.hpp"
#include "qplay/rng.hpp"
#include "qplay/train.hpp"

namespace qplay {
namespace {

using std::numbers::pi;

void expect_vec(const Vec3 &a, const Vec3 &b, double tol) {
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(a[i], b[i], tol) << i;
}

TEST(Bloch, PolesAndEquator) {
    expect_vec(bloch_coordinates(StateVector::basis(1, 0)), {0, 0, 1}, 1e-15);
    expect_vec(bloch_coordinates(StateVector::basis(1, 1)), {0, 0, -1}, 1e-15);
    // theta = pi/2, phi = 0 in cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
    const auto plus = StateVector::from_amplitudes(
        1, {std::cos(pi / 4), std::polar(std::sin(pi / 4), 0.0)});
    expect_vec(bloch_coordinates(plus), {std::sin(pi / 2), 0, std::cos(pi / 2)}, 1e-15);
    EXPECT_THROW((void)bloch_coordinates(new_zero_state(2)), DomainError);
}

TEST(Bloch, RyRotationTracesGreatCircle) {
    for (double t : {0.0, pi / 4, pi / 2, pi}) {
        const auto s = apply_single_qubit_gate(new_zero_state(1),
                                               rotation_gate(0, t, 0), 0);
        expect_vec(bloch_coordinates(s), {std::sin(t), 0, std::cos(t)}, 1e-9);
    }
}

TEST(Bloch, UnitNormAndPhaseInvariant) {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const auto s = fixtures::random_state(1, rng);
        const auto v = bloch_coordinates(s);
        EXPECT_NEAR(std::hypot(v[0], v[1], v[2]), 1.0, 1e-9);
        const Complex ph = std::polar(1.0, rng.uniform(0, 2 * pi));
        const auto r = StateVector::from_amplitudes(1, {s[0] * ph, s[1] * ph});
        expect_vec(bloch_coordinates(r), v, 1e-12);
    }
}

TEST(Simplex, VertexBellMidpointAndCentroid) {
    const auto v = default_simplex_vertices();
    const auto p00 = simplex_coordinates(StateVector::basis(2, 0));
    expect_vec(p00.p, v[0], 1e-15);
    EXPECT_NEAR(p00.concurrence_size, 0.0, 1e-15);

    const auto bells = fixtures::bell_states();
    const auto phi = simplex_coordinates(bells[0]);
    for (std::size_t d = 0; d < 3; ++d) {
        EXPECT_NEAR(phi.p[d], (v[0][d] + v[3][d]) / 2, 1e-12);
    }
    EXPECT_NEAR(phi.concurrence_size, 1.0, 1e-10);
    const auto psi = simplex_coordinates(bells[2]);
    for (std::size_t d = 0; d < 3; ++d) {
        EXPECT_NEAR(psi.p[d], (v[1][d] + v[2][d]) / 2, 1e-12);
    }

    const auto uniform = simplex_coordinates(
        StateVector::from_amplitudes(2, {0.5, 0.5, 0.5, 0.5}));
    expect_vec(uniform.p, {0, 0, 0}, 1e-15);
}

TEST(Simplex, BarycentricAndPhaseProperties) {
    Rng rng(12);
    for (int i = 0; i < 300; ++i) {
        const auto s = fixtures::random_state(2, rng);
        const auto pt = simplex_coordinates(s);
        double sum = 0;
        for (double w : pt.weights) {
            EXPECT_GE(w, -1e-12);
            sum += w;
        }
        EXPECT_NEAR(sum, 1.0, 1e-9);
        EXPECT_GE(pt.phase_hue, 0.0);
        EXPECT_LT(pt.phase_hue, 2 * pi);
        // Global phase moves nothing, including the hue.
        std::vector<Complex> a(s.amplitudes().begin(), s.amplitudes().end());
        const Complex ph = std::polar(1.0, rng.uniform(0, 2 * pi));
        for (auto &c : a) c *= ph;
        const auto q = simplex_coordinates(StateVector::from_amplitudes(2, a));
        expect_vec(q.p, pt.p, 1e-12);
        EXPECT_NEAR(q.concurrence_size, pt.concurrence_size, 1e-12);
        const double dh = std::abs(q.phase_hue - pt.phase_hue);
        EXPECT_LT(std::min(dh, 2 * pi - dh), 1e-9);
    }
}

TEST(Simplex, PhaseSeparatesBellPairs) {
    const auto bells = fixtures::bell_states();
    EXPECT_NEAR(simplex_coordinates(bells[0]).phase_hue, 0.0, 1e-12);
    // Largest amplitudes tie, so the first one wins and the hue is 0 too;
    // a state with a dominant negative amplitude shows pi.
    const double a = std::sqrt(0.3), b = std::sqrt(0.7);
    const auto s = StateVector::from_amplitudes(2, {a, 0, 0, -b});
    EXPECT_NEAR(simplex_coordinates(s).phase_hue, pi, 1e-12);
}

TEST(Simplex, Errors) {
    EXPECT_THROW((void)simplex_coordinates(new_zero_state(1)), DomainError);
    const std::array<Vec3, 4> flat{{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}};
    EXPECT_THROW((void)simplex_coordinates(new_zero_state(2), flat), ConfigError);
}

TEST(PointClouds, OneCloudPerLayer) {
    const ModelConfig cfg{1, 3, Variant::Compact, Entangler::None, 2};
    const auto [m, p] = build_model(cfg, 3);
    std::vector<ForwardTrace> traces;
    std::vector<int> labels, preds;
    for (int i = 0; i < 10; ++i) {
        traces.push_back(forward(m, p, {0.1 * i, -0.05 * i, 0}));
        labels.push_back(i % 2);
        preds.push_back(argmax_label(traces.back().class_scores));
    }
    const auto clouds = layer_point_clouds(traces, labels, preds);
    ASSERT_EQ(clouds.size(), 3u);
    for (const auto &c : clouds) {
        const auto &pts = std::get<std::vector<BlochPoint>>(c);
        ASSERT_EQ(pts.size(), 10u);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            EXPECT_EQ(pts[i].correct, labels[i] == preds[i]);
        }
    }
}

TEST(PointClouds, ZeroParametersCollapseToPoleAndVertex) {
    for (int nq : {1, 2}) {
        const ModelConfig cfg{nq, 2, Variant::Compact,
                              nq == 2 ? Entangler::CZ : Entangler::None, 2};
        const Model m(cfg);
        std::vector<ForwardTrace> traces;
        for (int i = 0; i < 5; ++i) {
            traces.push_back(forward(m, ParameterSet::zeros(cfg), {0.2 * i, 0.1, 0}));
        }
        const std::vector<int> labels(5, 0);
        const auto clouds = layer_point_clouds(traces, labels, labels);
        for (const auto &c : clouds) {
            if (nq == 1) {
                for (const auto &pt : std::get<0>(c)) expect_vec(pt.xyz, {0, 0, 1}, 1e-15);
            } else {
                for (const auto &pt : std::get<1>(c))
                    expect_vec(pt.p, default_simplex_vertices()[0], 1e-15);
            }
        }
    }
}

TEST(PointClouds, SubsamplesToDisplayLimit) {
    const ModelConfig cfg{1, 1, Variant::Compact, Entangler::None, 2};
    const auto [m, p] = build_model(cfg, 3);
    std::vector<ForwardTrace> traces(250, forward(m, p, {0.1, 0.1, 0}));
    const std::vector<int> labels(250, 1);
    const auto a = layer_point_clouds(traces, labels, labels, 5);
    EXPECT_EQ(std::get<0>(a[0]).size(), kDisplayPointLimit);
}

TEST(PointClouds, RejectHeterogeneousTraces) {
    const ModelConfig c1{1, 1, Variant::Compact, Entangler::None, 2};
    const ModelConfig c2{1, 2, Variant::Compact, Entangler::None, 2};
    const std::vector<ForwardTrace> traces{
        forward(Model(c1), ParameterSet::zeros(c1), {0, 0, 0}),
        forward(Model(c2), ParameterSet::zeros(c2), {0, 0, 0})};
    const std::vector<int> l{0, 0};
    EXPECT_THROW((void)layer_point_clouds(traces, l, l), DomainError);
}

TEST(DecisionGrid, IdentityModelPredictsClassZeroEverywhere) {
    const ModelConfig cfg{1, 2, Variant::Compact, Entangler::None, 2};
    const auto g = decision_grid(Model(cfg), ParameterSet::zeros(cfg), 10);
    ASSERT_EQ(g.labels.size(), 100u);
    for (std::size_t i = 0; i < g.labels.size(); ++i) {
        EXPECT_EQ(g.labels[i], 0);
        EXPECT_NEAR(g.scores[i], 1.0, 1e-15);
    }
    EXPECT_THROW((void)decision_grid(Model(cfg), ParameterSet::zeros(cfg), 7), ConfigError);
    EXPECT_THROW((void)decision_grid(Model(cfg), ParameterSet::zeros(cfg), 201), ConfigError);
}

TEST(DecisionGrid, TrainedCircleSeparatesCentreFromCorner) {
    const ModelConfig cfg{1, 4, Variant::Compact, Entangler::None, 2};
    const auto d = generate(DatasetKind::Circle, 200, 42, 2);
    const auto s = split(d, 0.25, 42);
    Trainer t(cfg, s.train, s.test, {0.05, 16, 42});
    for (int e = 0; e < 30; ++e) t.train_epoch();
    const int res = 21;
    const auto g = decision_grid(t.model(), t.params(), res);
    const auto centre = static_cast<std::size_t>((res / 2) * res + res / 2);
    EXPECT_EQ(g.labels[centre], 1);
    EXPECT_EQ(g.labels[0], 0);
}

} // namespace
} // namespace qplay
