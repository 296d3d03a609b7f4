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
 * @file session.hpp
 * Training sessions driven by control commands, and the registry that owns
 * them.
 *
 * Each session runs one worker thread that owns its Trainer. Commands are
 * queued and applied by the worker between batches, in arrival order;
 * control() returns once its command has been applied. Frames are
 * published by the worker and fanned out to subscriptions, each of which
 * holds only the newest undelivered frame.
 */
#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qplay/config.hpp"
#include "qplay/frame.hpp"

namespace qplay {

using Clock = std::chrono::steady_clock;
using FramePtr = std::shared_ptr<const Frame>;

/// A subscriber's view of one session generation. Frames arrive in strictly
/// increasing (epoch, step) order; a reset or session shutdown closes the
/// subscription after any frame still pending has been taken.
class Subscription {
  public:
    /// Next undelivered frame, waiting up to `timeout`. Null on timeout or
    /// once closed and drained.
    [[nodiscard]] FramePtr next(std::chrono::milliseconds timeout);

    /// True when closed and nothing is pending.
    [[nodiscard]] bool finished() const;

    [[nodiscard]] std::uint64_t generation() const noexcept {
        return generation_;
    }

    explicit Subscription(std::uint64_t generation)
        : generation_(generation) {}

  private:
    friend class Session;
    void offer(FramePtr frame);
    void close();

    mutable std::mutex mu_;
    std::condition_variable cv_;
    FramePtr pending_;
    bool closed_ = false;
    std::uint64_t generation_;
};

class Session {
  public:
    /// Builds the dataset and model and publishes the epoch-0 frame.
    /// Throws ConfigError for configurations the engine rejects.
    Session(std::string id, SessionConfig config);
    ~Session();

    Session(const Session &) = delete;
    Session &operator=(const Session &) = delete;

    [[nodiscard]] const std::string &id() const noexcept { return id_; }

    /// Applies `cmd` and returns the resulting state.
    SessionState control(const ControlCommand &cmd);

    [[nodiscard]] SessionState state() const;
    [[nodiscard]] FramePtr snapshot() const;
    /// The latest frame is delivered first.
    [[nodiscard]] std::shared_ptr<Subscription> subscribe();
    /// Parameters after the most recent optimizer step.
    [[nodiscard]] std::vector<double> parameters() const;
    [[nodiscard]] SessionConfig config() const;

    [[nodiscard]] Clock::time_point last_activity() const;
    [[nodiscard]] bool has_subscribers() const;

    /// Stops the worker and closes all subscriptions. Idempotent.
    void shutdown();

  private:
    struct Pending {
        ControlCommand cmd;
        std::promise<SessionState> done;
    };

    void worker_loop();
    SessionState apply(const ControlCommand &cmd);
    /// One optimizer step; returns true if it completed an epoch.
    bool run_batch(bool force_frame);
    void publish(std::optional<double> batch_loss);
    void set_state(SessionState s);
    void touch();

    const std::string id_;

    // Worker-owned.
    SessionConfig config_;
    Trainer trainer_;
    std::unique_ptr<FrameBuilder> builder_;
    std::uint64_t generation_ = 0;

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::deque<Pending> queue_;
    SessionState state_ = SessionState::Paused;
    bool stop_ = false;
    FramePtr latest_;
    std::vector<double> params_;
    SessionConfig config_view_;
    std::vector<std::weak_ptr<Subscription>> subscribers_;
    mutable Clock::time_point last_activity_;

    std::thread worker_;
};

class SessionRegistry {
  public:
    static constexpr std::chrono::minutes kDefaultIdleTimeout{30};

    explicit SessionRegistry(Clock::duration idle_timeout = kDefaultIdleTimeout)
        : idle_timeout_(idle_timeout) {}
    ~SessionRegistry();

    /// Returns the new session id. Throws ConfigError on invalid config.
    std::string create(const SessionConfig &config);
    /// Throws NotFoundError for unknown ids.
    [[nodiscard]] std::shared_ptr<Session> find(const std::string &id) const;

    SessionState control(const std::string &id, const ControlCommand &cmd);
    [[nodiscard]] FramePtr snapshot(const std::string &id) const;
    [[nodiscard]] std::shared_ptr<Subscription> subscribe(const std::string &id);

    /// Removes sessions idle for longer than the timeout and without live
    /// subscribers. Returns how many were removed.
    std::size_t reap_idle(Clock::time_point now);

    [[nodiscard]] std::size_t size() const;
    /// Shuts down and removes every session.
    void clear();

  private:
    Clock::duration idle_timeout_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t counter_ = 0;
};

} // namespace qplay
