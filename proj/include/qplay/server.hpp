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
 * @file server.hpp
 * HTTP front end of the session registry.
 *
 *   POST /sessions                 SessionConfig  -> {"session_id"} | 422
 *   POST /sessions/{id}/control    ControlCommand -> {"state"} | 404 | 422
 *   GET  /sessions/{id}/snapshot   -> Frame | 404
 *   GET  /sessions/{id}/stream     -> text/event-stream of Frame | 404
 *   GET  /                         -> UI (directory or built-in page)
 *
 * Stream events are "frame" (data: Frame JSON), "reset" (data:
 * {"generation"}) sent before the first frame of a new generation, and
 * "end" when the session is gone. Comment lines keep idle streams alive.
 */
#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "qplay/session.hpp"

namespace qplay {

struct ServerOptions {
    std::string bind = "127.0.0.1";
    /// 0 picks a free port.
    int port = 8080;
    /// Static files served at "/"; the built-in page is used when unset.
    std::optional<std::filesystem::path> ui_dir;
    Clock::duration idle_timeout = SessionRegistry::kDefaultIdleTimeout;
    std::chrono::milliseconds reap_interval{60'000};
    std::chrono::milliseconds keepalive{15'000};
};

class Server {
  public:
    explicit Server(ServerOptions options);
    ~Server();

    Server(const Server &) = delete;
    Server &operator=(const Server &) = delete;

    /// Binds the listening socket and returns the bound port. Throws
    /// std::runtime_error when binding fails or the UI directory is missing.
    int bind();
    /// Serves until stop(); bind() must have succeeded.
    void run();
    /// bind() then run() on a background thread; returns the port.
    int start();
    /// Ends open streams, stops listening and shuts down all sessions.
    /// Safe to call from any thread, including signal watchers.
    void stop();

    [[nodiscard]] SessionRegistry &registry() noexcept;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// The page served at "/" when no UI directory is configured.
[[nodiscard]] const std::string &builtin_ui_page();

} // namespace qplay
