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
 * @file config.hpp
 * Session configuration and control commands, with their JSON forms.
 *
 * A SessionConfig document looks like
 *
 *     {
 *       "dataset":   {"kind": "circle", "n": 200, "seed": 42,
 *                     "noise": 0.0, "test_fraction": 0.25},
 *       "model":     {"qubits": 1, "layers": 6, "variant": "compact",
 *                     "entangler": "none", "classes": 2},
 *       "optimizer": {"lr": 0.05, "batch_size": 16},
 *       "seed": 42,
 *       "grid_resolution": 40,
 *       "frames_per_epoch": 1,
 *       "max_epochs": 0
 *     }
 *
 * Every field is optional. `dataset.seed` falls back to `seed`,
 * `model.classes` to the dataset's natural class count, and
 * `model.entangler` to "cz" for two qubits and "none" for one.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json.hpp>

#include "qplay/datasets.hpp"
#include "qplay/model.hpp"

namespace qplay {

struct DatasetSpec {
    DatasetKind kind = DatasetKind::Circle;
    int n = 200;
    std::uint64_t seed = 42;
    double noise = 0.0;
    double test_fraction = 0.25;

    friend bool operator==(const DatasetSpec &, const DatasetSpec &) = default;
};

struct SessionConfig {
    DatasetSpec dataset;
    ModelConfig model{1, 6, Variant::Compact, Entangler::None, 2};
    double lr = 0.05;
    int batch_size = 16;
    /// Parameter initialization and shuffling.
    std::uint64_t seed = 42;
    int grid_resolution = 40;
    /// Frames published per epoch while training; a value at or above the
    /// number of batches publishes after every batch.
    int frames_per_epoch = 1;
    /// Training stops (state "finished") after this many epochs; 0 = never.
    int max_epochs = 0;

    friend bool operator==(const SessionConfig &,
                           const SessionConfig &) = default;
};

/// Parses and validates a SessionConfig document. Throws ValidationError
/// listing every offending field by its dotted path (e.g. "model.entangler").
[[nodiscard]] SessionConfig parse_session_config(const nlohmann::json &doc);

/// Fully explicit document; parse_session_config(to_json(c)) == c.
[[nodiscard]] nlohmann::json to_json(const SessionConfig &config);

/// `base` overlaid with `overrides` (JSON merge patch), used for the
/// defaults < file < command-line precedence.
[[nodiscard]] nlohmann::json merge_config(nlohmann::json base,
                                          const nlohmann::json &overrides);

namespace command {
struct Start {};
struct Pause {};
struct StepEpoch {};
struct StepBatch {};
struct Reset {
    std::optional<std::uint64_t> seed;
};
struct UpdateHyper {
    std::optional<double> lr;
    std::optional<int> batch_size;
};
} // namespace command

using ControlCommand =
    std::variant<command::Start, command::Pause, command::StepEpoch,
                 command::StepBatch, command::Reset, command::UpdateHyper>;

/// {"command": "start" | "pause" | "step_epoch" | "step_batch" | "reset" |
/// "update_hyper", "seed"?: int, "lr"?: number, "batch_size"?: int}.
/// Throws ValidationError for malformed commands.
[[nodiscard]] ControlCommand parse_control_command(const nlohmann::json &doc);

[[nodiscard]] nlohmann::json to_json(const ControlCommand &cmd);

} // namespace qplay
