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

#include "qplay/train.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "oracles.hpp"
#include "qplay/errors.hpp"
#include "qplay/rng.hpp"

namespace qplay {
namespace {

using std::numbers::pi;

std::vector<Sample> random_batch(Rng &rng, int n, int n_classes) {
    std::vector<Sample> b;
    for (int i = 0; i < n; ++i) {
        b.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1),
                     static_cast<int>(rng.below(static_cast<std::uint64_t>(n_classes)))});
    }
    return b;
}

std::vector<Sample> separable_set(std::uint64_t seed, int n) {
    Rng rng(seed);
    std::vector<Sample> s;
    while (static_cast<int>(s.size()) < n) {
        const double x = rng.uniform(-1, 1), y = rng.uniform(-1, 1);
        if (std::abs(x) > 0.2) {
            s.push_back({x, y, x > 0 ? 1 : 0});
        }
    }
    return s;
}

TEST(FidelityLoss, ReferenceValues) {
    const auto targets = target_states(2, 1);
    ForwardTrace on, off, half;
    on.final_state = StateVector::basis(1, 0);
    off.final_state = StateVector::basis(1, 1);
    const double s = 1 / std::sqrt(2.0);
    half.final_state = StateVector::from_amplitudes(1, {s, s});
    const std::vector<ForwardTrace> hits{on, on, off};
    EXPECT_DOUBLE_EQ(fidelity_loss(hits, std::vector<int>{0, 0, 1}, targets), 0.0);
    EXPECT_DOUBLE_EQ(fidelity_loss(hits, std::vector<int>{1, 1, 0}, targets), 3.0);
    // 1 - |<0|+>|^2
    const std::vector<ForwardTrace> one{half};
    EXPECT_NEAR(fidelity_loss(one, std::vector<int>{0}, targets),
                1 - std::norm(oracle::zero_state(1)[0] * s), 1e-15);
    EXPECT_THROW((void)fidelity_loss({}, {}, targets), DomainError);
}

TEST(CrossEntropyLoss, ReferenceValues) {
    const std::vector<std::vector<double>> onehot{{1, 0, 0, 0}, {0, 0, 1, 0}};
    EXPECT_LE(cross_entropy_loss(onehot, std::vector<int>{0, 2}), 1e-11);
    const std::vector<std::vector<double>> uniform{{0.25, 0.25, 0.25, 0.25}};
    EXPECT_NEAR(cross_entropy_loss(uniform, std::vector<int>{3}), std::log(4.0), 1e-11);
    const std::vector<std::vector<double>> half{{0.5, 0.5}};
    EXPECT_NEAR(cross_entropy_loss(half, std::vector<int>{1}), std::log(2.0), 1e-11);
    EXPECT_THROW((void)cross_entropy_loss({}, {}), DomainError);
}

TEST(Gradients, ClosedFormSingleAngle) {
    const ModelConfig cfg{1, 1, Variant::Separate, Entangler::None, 2};
    const Model m(cfg);
    const std::vector<Sample> batch{{0, 0, 1}};
    const ParameterSet p(cfg, {0, pi / 2, 0});
    const auto g = gradients(m, p, batch, LossKind::FidelityChi2);
    EXPECT_NEAR(g[1], -std::sin(pi / 2) / 2, 1e-12);
    auto loss_at = [&](const std::vector<double> &v) {
        return batch_loss(m, ParameterSet(cfg, v), batch, LossKind::FidelityChi2);
    };
    const auto fd = oracle::central_differences(loss_at, {0, pi / 2, 0});
    EXPECT_NEAR(fd[1], -0.5, 1e-9);
    EXPECT_NEAR(loss_at({0, pi / 2, 0}), 1 - std::pow(std::sin(pi / 4), 2), 1e-15);
}

TEST(Gradients, VanishAtGlobalOptimum) {
    // Zero parameters keep every sample at |0>, which is class 0's target.
    const ModelConfig cfg{1, 3, Variant::Compact, Entangler::None, 2};
    const Model m(cfg);
    const std::vector<Sample> batch{{0.3, 0.1, 0}, {-0.7, 0.9, 0}};
    const auto g = gradients(m, ParameterSet::zeros(cfg), batch, LossKind::FidelityChi2);
    double norm = 0;
    for (double v : g) norm += v * v;
    EXPECT_LT(std::sqrt(norm), 1e-8);
}

TEST(Gradients, MatchFiniteDifferencesOnRandomConfigs) {
    Rng rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const int nq = 1 + static_cast<int>(rng.below(2));
        const int layers = std::array{1, 2, 4}[rng.below(3)];
        const auto variant = rng.below(2) ? Variant::Separate : Variant::Compact;
        const auto ent = nq == 1 ? Entangler::None
                                 : (rng.below(2) ? Entangler::CZ : Entangler::CNOT);
        const int classes = 2 + static_cast<int>(rng.below(3));
        const ModelConfig cfg{nq, layers, variant, ent, classes};
        const auto [m, p] = build_model(cfg, rng.below(1u << 20));
        const auto batch = random_batch(rng, 4, classes);
        const auto kind = loss_kind_for(cfg);
        const auto g = gradients(m, p, batch, kind);
        const auto fd = oracle::central_differences(
            [&](const std::vector<double> &v) {
                return batch_loss(m, ParameterSet(cfg, v), batch, kind);
            },
            {p.values().begin(), p.values().end()});
        for (std::size_t i = 0; i < g.size(); ++i) {
            EXPECT_TRUE(oracle::gradient_close(g[i], fd[i]))
                << "trial " << trial << " param " << i << ": " << g[i]
                << " vs " << fd[i];
        }
    }
}

TEST(Gradients, RejectMismatchedLossKind) {
    const ModelConfig cfg{2, 1, Variant::Compact, Entangler::CZ, 4};
    const auto [m, p] = build_model(cfg, 1);
    const std::vector<Sample> batch{{0, 0, 0}};
    EXPECT_THROW((void)gradients(m, p, batch, LossKind::FidelityChi2), DomainError);
    EXPECT_THROW((void)gradients(m, p, {}, LossKind::CrossEntropy), DomainError);
}

TEST(Adam, ZeroGradientFromFreshStateIsNoop) {
    const std::vector<double> p{0.5, -1.0};
    const auto up = adam_step(AdamState::fresh(2), p, std::vector<double>{0, 0});
    EXPECT_EQ(up.params, p);
    EXPECT_EQ(up.state.m, (std::vector<double>{0, 0}));
    EXPECT_EQ(up.state.v, (std::vector<double>{0, 0}));
    EXPECT_EQ(up.state.t, 1);
}

TEST(Adam, FirstStepIsLearningRateTimesSign) {
    AdamHyper h;
    h.lr = 0.1;
    const auto up = adam_step(AdamState::fresh(1, h), std::vector<double>{1.0},
                              std::vector<double>{0.2});
    EXPECT_NEAR(up.params[0] - 1.0, -0.1 * 0.2 / (0.2 + 1e-8), 1e-15);
}

TEST(Adam, TwoStepsMatchScalarRecurrence) {
    AdamHyper h;
    h.lr = 0.1;
    const double g = -0.3;
    auto s = AdamState::fresh(1, h);
    std::vector<double> p{2.0};
    // Scalar oracle.
    double m = 0, v = 0, x = 2.0;
    for (int t = 1; t <= 2; ++t) {
        m = h.beta1 * m + (1 - h.beta1) * g;
        v = h.beta2 * v + (1 - h.beta2) * g * g;
        const double mh = m / (1 - std::pow(h.beta1, t));
        const double vh = v / (1 - std::pow(h.beta2, t));
        x -= h.lr * mh / (std::sqrt(vh) + h.eps);
        auto up = adam_step(s, p, std::vector<double>{g});
        p = up.params;
        s = up.state;
    }
    EXPECT_NEAR(p[0], x, 1e-15);
    EXPECT_NEAR(s.m[0], m, 1e-15);
    EXPECT_NEAR(s.v[0], v, 1e-15);
    EXPECT_EQ(s.t, 2);
    EXPECT_THROW((void)adam_step(s, std::vector<double>{1, 2}, std::vector<double>{1}),
                 DomainError);
}

TEST(Trainer, ZeroLearningRateIsFixedPoint) {
    const ModelConfig cfg{1, 2, Variant::Compact, Entangler::None, 2};
    Trainer t(cfg, separable_set(1, 40), separable_set(2, 10), {0.0, 8, 3});
    const auto before = t.params();
    const auto metrics = t.train_epoch();
    EXPECT_EQ(t.params(), before);
    EXPECT_EQ(metrics.epoch, 1);
    EXPECT_GE(metrics.train_accuracy, 0.0);
    EXPECT_LE(metrics.train_accuracy, 1.0);
}

TEST(Trainer, OneEpochReducesLossOnSeparableSet) {
    const ModelConfig cfg{1, 2, Variant::Compact, Entangler::None, 2};
    Trainer t(cfg, separable_set(1, 64), separable_set(2, 16), {0.05, 16, 42});
    const double initial = t.evaluate().train_loss;
    const auto m = t.train_epoch();
    EXPECT_LT(m.train_loss, initial);
    EXPECT_GE(m.test_accuracy, 0.0);
    EXPECT_LE(m.test_accuracy, 1.0);
}

TEST(Trainer, StepBatchCompletesEpochAndResetRestores) {
    const ModelConfig cfg{1, 1, Variant::Separate, Entangler::None, 2};
    Trainer t(cfg, separable_set(1, 20), separable_set(2, 5), {0.05, 8, 9});
    const auto initial = t.params();
    EXPECT_FALSE(t.step_batch().epoch_metrics);
    EXPECT_TRUE(t.mid_epoch());
    EXPECT_FALSE(t.step_batch().epoch_metrics);
    const auto r = t.step_batch();
    ASSERT_TRUE(r.epoch_metrics);
    EXPECT_EQ(t.epoch(), 1);
    EXPECT_EQ(t.step(), 3);
    EXPECT_EQ(t.history().size(), 1u);
    t.reset();
    EXPECT_EQ(t.params(), initial);
    EXPECT_EQ(t.epoch(), 0);
    EXPECT_TRUE(t.history().empty());
    t.reset(7);
    const auto seven = t.params();
    t.train_epoch();
    t.reset(7);
    EXPECT_EQ(t.params(), seven);
}

TEST(Trainer, DeterministicMetricSequence) {
    const ModelConfig cfg{2, 2, Variant::Compact, Entangler::CZ, 2};
    auto run = [&]() {
        Trainer t(cfg, separable_set(3, 32), separable_set(4, 8), {0.05, 8, 5});
        std::vector<double> seq;
        for (int e = 0; e < 3; ++e) {
            const auto m = t.train_epoch();
            seq.insert(seq.end(), {m.train_loss, m.train_accuracy, m.test_accuracy});
        }
        return seq;
    };
    EXPECT_EQ(run(), run());
}

TEST(Accuracy, ReferenceValuesAndComplement) {
    const ModelConfig cfg{1, 1, Variant::Compact, Entangler::None, 2};
    const Model m(cfg);
    const auto zero = ParameterSet::zeros(cfg);
    const std::vector<Sample> all0{{0.1, 0.2, 0}, {-0.4, 0.3, 0}};
    EXPECT_DOUBLE_EQ(accuracy(m, zero, all0), 1.0);
    const auto p = build_model(cfg, 17).second;
    auto data = separable_set(5, 50);
    const double a = accuracy(m, p, data);
    for (auto &s : data) s.label = 1 - s.label;
    EXPECT_NEAR(accuracy(m, p, data), 1 - a, 1e-15);
    EXPECT_THROW((void)accuracy(m, p, std::vector<Sample>{}), DomainError);
}

TEST(Accuracy, RandomParametersAverageToChance) {
    const ModelConfig cfg{1, 3, Variant::Compact, Entangler::None, 2};
    const Model m(cfg);
    const auto data = separable_set(8, 100);
    double mean = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        mean += accuracy(m, build_model(cfg, seed).second, data);
    }
    mean /= 20;
    EXPECT_NEAR(mean, 0.5, 0.15);
}

TEST(ParameterShift, AgreesWithReverseMode) {
    Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const ModelConfig cfg{1, 1 + static_cast<int>(rng.below(4)),
                              Variant::Separate, Entangler::None, 2};
        const auto [m, p] = build_model(cfg, rng.below(10000));
        const Sample s{rng.uniform(-1, 1), rng.uniform(-1, 1),
                       static_cast<int>(rng.below(2))};
        const std::vector<Sample> batch{s};
        const auto g = gradients(m, p, batch, LossKind::FidelityChi2);
        const auto ps = oracle::parameter_shift(
            [&](const std::vector<double> &v) {
                return batch_loss(m, ParameterSet(cfg, v), batch, LossKind::FidelityChi2);
            },
            {p.values().begin(), p.values().end()});
        for (std::size_t i = 0; i < g.size(); ++i) {
            EXPECT_NEAR(g[i], ps[i], 1e-7);
        }
    }
}

} // namespace
} // namespace qplay
