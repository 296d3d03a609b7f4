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
 * @file frame.hpp
 * Frames: self-contained snapshots of a training run, as streamed to
 * clients and written to frame logs.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qplay/config.hpp"
#include "qplay/train.hpp"
#include "qplay/viz.hpp"

namespace qplay {

enum class SessionState { Paused, Running, Finished };

[[nodiscard]] std::string_view to_string(SessionState state);

struct FramePoint {
    Vec3 xyz{};
    int label = 0;
    bool correct = false;
    /// Two-qubit points only: concurrence and phase hue.
    std::optional<double> size;
    std::optional<double> hue;
    double input_x = 0.0;
    double input_y = 0.0;
    bool test = false;
};

struct FrameLayer {
    std::vector<FramePoint> points;
};

struct FrameMetrics {
    double train_loss = 0.0;
    double train_loss_sum = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;
    /// Loss of the batch that produced this frame, if any.
    std::optional<double> batch_loss;
};

struct FrameGrid {
    int resolution = 0;
    std::vector<int> labels;
    std::vector<double> scores;
    /// Labels of the dataset rule on the same lattice.
    std::vector<int> truth;
};

struct Frame {
    std::string session_id;
    /// Incremented by every reset.
    std::uint64_t generation = 0;
    int epoch = 0;
    std::int64_t step = 0;
    SessionState state = SessionState::Paused;
    FrameMetrics metrics;
    std::vector<EpochMetrics> history;
    /// "bloch" for one qubit, "simplex" for two.
    std::string geometry;
    /// One entry per layer; the last one is the final cloud.
    std::vector<FrameLayer> layers;
    FrameGrid grid;
    /// summary[c][k]: mean score of class k over training samples labelled c.
    std::vector<std::vector<double>> class_summary;
    /// Bloch vectors of the class targets, or the simplex vertices.
    std::vector<Vec3> targets;
    nlohmann::json config_echo;
};

[[nodiscard]] nlohmann::json to_json(const Frame &frame);

/// Dataset, split and trainer described by a session configuration.
[[nodiscard]] Trainer make_trainer(const SessionConfig &config);

/// Builds frames for one configuration. The rule grid is computed once.
class FrameBuilder {
  public:
    explicit FrameBuilder(SessionConfig config);

    [[nodiscard]] const SessionConfig &config() const noexcept {
        return config_;
    }

    [[nodiscard]] Frame build(const Trainer &trainer,
                              const std::string &session_id,
                              std::uint64_t generation, SessionState state,
                              std::optional<double> batch_loss) const;

  private:
    SessionConfig config_;
    nlohmann::json config_echo_;
    std::vector<int> truth_;
};

} // namespace qplay
