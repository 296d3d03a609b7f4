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
 * @file headless.hpp
 * Training runs without a server, writing
 *
 *   metrics.csv    epoch,train_loss,train_acc,test_acc (one row per epoch)
 *   frames.jsonl   one Frame per line: the epoch-0 frame, then the frame
 *                  cadence of the configuration
 *   params.json    {"config", "epochs", "param_count", "params"}
 *
 * Artifacts are byte-identical for a fixed configuration on one platform.
 */
#pragma once

#include <filesystem>
#include <iosfwd>

#include <nlohmann/json.hpp>

#include "qplay/config.hpp"

namespace qplay {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntimeError = 1;
inline constexpr int kExitConfigError = 2;

/// Validates `config_doc` and `epochs` before touching the file system;
/// on a configuration problem returns kExitConfigError without creating
/// anything. Diagnostics go to `err`.
int run_headless(const nlohmann::json &config_doc, int epochs,
                 const std::filesystem::path &out_dir, std::ostream &err);

int run_headless(const SessionConfig &config, int epochs,
                 const std::filesystem::path &out_dir, std::ostream &err);

/// Shortest round-trip decimal form of v.
[[nodiscard]] std::string format_double(double v);

} // namespace qplay
