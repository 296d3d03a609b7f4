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
 * @file train.hpp
 * Losses, exact reverse-mode gradients, Adam, and the mini-batch loop.
 *
 * One-qubit models are trained on the fidelity loss
 *     chi2_F = sum_m (1 - |<target(y_m)|psi(x_m)>|^2),
 * two-qubit models on the mean cross-entropy of the renormalized basis-state
 * scores. Gradients are accumulated backwards through the gate chain with
 * the real and imaginary parts of each amplitude treated as independent
 * reals.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qplay/datasets.hpp"
#include "qplay/model.hpp"

namespace qplay {

enum class LossKind { FidelityChi2, CrossEntropy };

[[nodiscard]] std::string_view to_string(LossKind kind);

/// FidelityChi2 for one qubit, CrossEntropy for two.
[[nodiscard]] LossKind loss_kind_for(const ModelConfig &config);

inline constexpr double kCrossEntropyClip = 1e-12;

[[nodiscard]] inline FeatureVector features(const Sample &s) {
    return {s.x, s.y, 0.0};
}

/// Sum over samples of 1 - F(target(label), final state). Throws DomainError
/// on an empty batch or mismatched lengths.
[[nodiscard]] double fidelity_loss(std::span<const ForwardTrace> traces,
                                   std::span<const int> labels,
                                   const TargetStateSet &targets);

/// Mean over samples of -log(score[label] + 1e-12).
[[nodiscard]] double cross_entropy_loss(
    std::span<const std::vector<double>> score_sets,
    std::span<const int> labels);

/// Loss of `kind` on a batch: the chi2_F sum or the cross-entropy mean.
[[nodiscard]] double batch_loss(const Model &model, const ParameterSet &params,
                                std::span<const Sample> batch, LossKind kind);

struct LossAndGradient {
    double loss = 0.0;
    std::vector<double> gradient;
};

/// Exact d(loss)/d(parameter) for every flattened parameter.
[[nodiscard]] LossAndGradient loss_and_gradient(const Model &model,
                                                const ParameterSet &params,
                                                std::span<const Sample> batch,
                                                LossKind kind);

[[nodiscard]] std::vector<double> gradients(const Model &model,
                                            const ParameterSet &params,
                                            std::span<const Sample> batch,
                                            LossKind kind);

struct AdamHyper {
    double lr = 0.05;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t t = 0;
    AdamHyper hyper;

    [[nodiscard]] static AdamState fresh(std::size_t n, AdamHyper hyper = {});
};

struct AdamUpdate {
    std::vector<double> params;
    AdamState state;
};

/// One bias-corrected Adam step. Throws DomainError on length mismatch.
[[nodiscard]] AdamUpdate adam_step(const AdamState &state,
                                   std::span<const double> params,
                                   std::span<const double> grads);

struct EpochMetrics {
    int epoch = 0;
    /// Per-sample mean loss over the training slice.
    double train_loss = 0.0;
    /// The same loss summed over the training slice.
    double train_loss_sum = 0.0;
    double train_accuracy = 0.0;
    double test_accuracy = 0.0;
};

/// Fraction of samples whose predicted label matches. Throws DomainError on
/// an empty slice.
[[nodiscard]] double accuracy(const Model &model, const ParameterSet &params,
                              std::span<const Sample> samples);

struct TrainOptions {
    double lr = 0.05;
    int batch_size = 16;
    std::uint64_t seed = 0;
};

struct BatchResult {
    double batch_loss = 0.0;
    /// Set when this batch completed an epoch.
    std::optional<EpochMetrics> epoch_metrics;
};

/// Training state of one model on one train/test split.
///
/// Each epoch visits the training slice in an order shuffled with a seed
/// derived from (seed, epoch). Batches can be stepped one at a time, and
/// hyperparameter changes take effect at the next batch.
class Trainer {
  public:
    Trainer(const ModelConfig &config, std::vector<Sample> train,
            std::vector<Sample> test, TrainOptions options);

    [[nodiscard]] const Model &model() const noexcept { return model_; }
    [[nodiscard]] const ParameterSet &params() const noexcept {
        return params_;
    }
    [[nodiscard]] const AdamState &optimizer() const noexcept { return adam_; }
    [[nodiscard]] const TrainOptions &options() const noexcept {
        return options_;
    }
    [[nodiscard]] LossKind loss_kind() const noexcept { return loss_kind_; }
    [[nodiscard]] std::span<const Sample> train_set() const noexcept {
        return train_;
    }
    [[nodiscard]] std::span<const Sample> test_set() const noexcept {
        return test_;
    }

    /// Completed epochs.
    [[nodiscard]] int epoch() const noexcept { return epoch_; }
    /// Optimizer steps since the last reset.
    [[nodiscard]] std::int64_t step() const noexcept { return step_; }
    [[nodiscard]] bool mid_epoch() const noexcept { return !order_.empty(); }
    /// Training samples already visited in the current epoch.
    [[nodiscard]] std::size_t epoch_cursor() const noexcept { return cursor_; }
    [[nodiscard]] const std::vector<EpochMetrics> &history() const noexcept {
        return history_;
    }

    BatchResult step_batch();
    /// Runs the remaining batches of the current epoch.
    EpochMetrics train_epoch();
    /// Metrics at the current parameters, labelled with epoch().
    [[nodiscard]] EpochMetrics evaluate() const;

    /// Fresh parameters, optimizer and history; a given seed replaces the
    /// configured one.
    void reset(std::optional<std::uint64_t> seed = std::nullopt);

    void set_lr(double lr);
    void set_batch_size(int batch_size);
    /// Replaces the parameters and clears the optimizer moments.
    void set_params(ParameterSet params);

  private:
    Model model_;
    ParameterSet params_;
    AdamState adam_;
    TrainOptions options_;
    LossKind loss_kind_;
    std::vector<Sample> train_;
    std::vector<Sample> test_;
    std::vector<std::size_t> order_;
    std::size_t cursor_ = 0;
    int epoch_ = 0;
    std::int64_t step_ = 0;
    std::vector<EpochMetrics> history_;
};

} // namespace qplay
