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

#include "qplay/session.hpp"

#include <algorithm>
#include <cstdio>
#include <random>
#include <type_traits>
#include <variant>

#include "qplay/errors.hpp"

namespace qplay {

FramePtr Subscription::next(std::chrono::milliseconds timeout) {
    std::unique_lock lk(mu_);
    cv_.wait_for(lk, timeout, [&] { return pending_ != nullptr || closed_; });
    FramePtr out = std::move(pending_);
    pending_.reset();
    return out;
}

bool Subscription::finished() const {
    std::lock_guard lk(mu_);
    return closed_ && pending_ == nullptr;
}

void Subscription::offer(FramePtr frame) {
    {
        std::lock_guard lk(mu_);
        if (closed_) {
            return;
        }
        pending_ = std::move(frame);
    }
    cv_.notify_all();
}

void Subscription::close() {
    {
        std::lock_guard lk(mu_);
        closed_ = true;
    }
    cv_.notify_all();
}

Session::Session(std::string id, SessionConfig config)
    : id_(std::move(id)), config_(std::move(config)),
      trainer_(make_trainer(config_)),
      builder_(std::make_unique<FrameBuilder>(config_)),
      config_view_(config_), last_activity_(Clock::now()) {
    params_.assign(trainer_.params().values().begin(),
                       trainer_.params().values().end());
    publish(std::nullopt);
    worker_ = std::thread([this] { worker_loop(); });
}

Session::~Session() { shutdown(); }

void Session::shutdown() {
    {
        std::lock_guard lk(mu_);
        stop_ = true;
    }
    cv_.notify_all();
    if (worker_.joinable() && worker_.get_id() != std::this_thread::get_id()) {
        worker_.join();
    }
    std::vector<std::weak_ptr<Subscription>> subs;
    std::deque<Pending> orphans;
    SessionState s;
    {
        std::lock_guard lk(mu_);
        subs.swap(subscribers_);
        orphans.swap(queue_);
        s = state_;
    }
    for (auto &w : subs) {
        if (auto sub = w.lock()) {
            sub->close();
        }
    }
    for (auto &p : orphans) {
        p.done.set_value(s);
    }
}

SessionState Session::control(const ControlCommand &cmd) {
    std::future<SessionState> result;
    {
        std::lock_guard lk(mu_);
        if (stop_) {
            throw NotFoundError("session '" + id_ + "' has been closed");
        }
        last_activity_ = Clock::now();
        queue_.push_back({cmd, {}});
        result = queue_.back().done.get_future();
    }
    cv_.notify_all();
    return result.get();
}

SessionState Session::state() const {
    std::lock_guard lk(mu_);
    return state_;
}

FramePtr Session::snapshot() const {
    std::lock_guard lk(mu_);
    last_activity_ = Clock::now();
    return latest_;
}

std::shared_ptr<Subscription> Session::subscribe() {
    std::lock_guard lk(mu_);
    last_activity_ = Clock::now();
    auto sub = std::make_shared<Subscription>(latest_->generation);
    if (stop_) {
        sub->close();
        return sub;
    }
    sub->offer(latest_);
    std::erase_if(subscribers_, [](const auto &w) { return w.expired(); });
    subscribers_.push_back(sub);
    return sub;
}

std::vector<double> Session::parameters() const {
    std::lock_guard lk(mu_);
    return params_;
}

SessionConfig Session::config() const {
    std::lock_guard lk(mu_);
    return config_view_;
}

Clock::time_point Session::last_activity() const {
    std::lock_guard lk(mu_);
    return last_activity_;
}

bool Session::has_subscribers() const {
    std::lock_guard lk(mu_);
    return std::any_of(subscribers_.begin(), subscribers_.end(),
                       [](const auto &w) {
                           auto s = w.lock();
                           return s && !s->finished();
                       });
}

void Session::touch() {
    std::lock_guard lk(mu_);
    last_activity_ = Clock::now();
}

void Session::set_state(SessionState s) {
    std::lock_guard lk(mu_);
    state_ = s;
}

void Session::worker_loop() {
    for (;;) {
        std::unique_lock lk(mu_);
        cv_.wait(lk, [&] {
            return stop_ || !queue_.empty() || state_ == SessionState::Running;
        });
        if (stop_) {
            return;
        }
        if (!queue_.empty()) {
            Pending item = std::move(queue_.front());
            queue_.pop_front();
            lk.unlock();
            try {
                item.done.set_value(apply(item.cmd));
            } catch (...) {
                item.done.set_exception(std::current_exception());
            }
            continue;
        }
        lk.unlock();
        try {
            run_batch(false);
        } catch (const std::exception &e) {
            std::fprintf(stderr, "session %s: training stopped: %s\n",
                         id_.c_str(), e.what());
            set_state(SessionState::Paused);
        }
    }
}

SessionState Session::apply(const ControlCommand &cmd) {
    const SessionState current = state();
    std::visit(
        [&](const auto &c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, command::Start>) {
                if (current == SessionState::Paused) {
                    set_state(SessionState::Running);
                }
            } else if constexpr (std::is_same_v<T, command::Pause>) {
                if (current == SessionState::Running) {
                    set_state(SessionState::Paused);
                }
            } else if constexpr (std::is_same_v<T, command::StepEpoch>) {
                if (current != SessionState::Finished) {
                    set_state(SessionState::Paused);
                    while (!run_batch(false)) {
                    }
                }
            } else if constexpr (std::is_same_v<T, command::StepBatch>) {
                if (current != SessionState::Finished) {
                    set_state(SessionState::Paused);
                    run_batch(true);
                }
            } else if constexpr (std::is_same_v<T, command::Reset>) {
                trainer_.reset(c.seed);
                ++generation_;
                std::vector<std::weak_ptr<Subscription>> old;
                {
                    std::lock_guard lk(mu_);
                    state_ = SessionState::Paused;
                    params_.assign(trainer_.params().values().begin(),
                       trainer_.params().values().end());
                    old.swap(subscribers_);
                }
                for (auto &w : old) {
                    if (auto sub = w.lock()) {
                        sub->close();
                    }
                }
                publish(std::nullopt);
            } else {
                if (c.lr) {
                    trainer_.set_lr(*c.lr);
                    config_.lr = *c.lr;
                }
                if (c.batch_size) {
                    trainer_.set_batch_size(*c.batch_size);
                    config_.batch_size = *c.batch_size;
                }
                builder_ = std::make_unique<FrameBuilder>(config_);
                std::lock_guard lk(mu_);
                config_view_ = config_;
            }
        },
        cmd);
    return state();
}

bool Session::run_batch(bool force_frame) {
    const auto n = trainer_.train_set().size();
    const auto before = trainer_.epoch_cursor();
    const BatchResult r = trainer_.step_batch();
    {
        std::lock_guard lk(mu_);
        params_.assign(trainer_.params().values().begin(),
                       trainer_.params().values().end());
    }
    bool publish_now = force_frame;
    if (r.epoch_metrics) {
        publish_now = true;
        if (config_.max_epochs > 0 && trainer_.epoch() >= config_.max_epochs) {
            set_state(SessionState::Finished);
        }
    } else {
        const auto per = static_cast<std::size_t>(config_.frames_per_epoch);
        const auto after = trainer_.epoch_cursor();
        publish_now = publish_now || (after * per) / n > (before * per) / n;
    }
    if (publish_now) {
        publish(r.batch_loss);
    }
    return r.epoch_metrics.has_value();
}

void Session::publish(std::optional<double> batch_loss) {
    auto frame = std::make_shared<const Frame>(
        builder_->build(trainer_, id_, generation_, state(), batch_loss));
    std::vector<std::shared_ptr<Subscription>> live;
    {
        std::lock_guard lk(mu_);
        latest_ = frame;
        for (auto &w : subscribers_) {
            if (auto s = w.lock()) {
                live.push_back(std::move(s));
            }
        }
    }
    for (auto &s : live) {
        s->offer(frame);
    }
}

SessionRegistry::~SessionRegistry() { clear(); }

std::string SessionRegistry::create(const SessionConfig &config) {
    static thread_local std::mt19937_64 gen{std::random_device{}()};
    std::string id;
    {
        std::lock_guard lk(mu_);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%012llx%04llx",
                      static_cast<unsigned long long>(gen() & 0xffffffffffffULL),
                      static_cast<unsigned long long>(++counter_ & 0xffffULL));
        id = buf;
    }
    auto session = std::make_shared<Session>(id, config);
    std::lock_guard lk(mu_);
    sessions_.emplace(id, std::move(session));
    return id;
}

std::shared_ptr<Session> SessionRegistry::find(const std::string &id) const {
    std::lock_guard lk(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) {
        throw NotFoundError("unknown session '" + id + "'");
    }
    return it->second;
}

SessionState SessionRegistry::control(const std::string &id,
                                      const ControlCommand &cmd) {
    return find(id)->control(cmd);
}

FramePtr SessionRegistry::snapshot(const std::string &id) const {
    return find(id)->snapshot();
}

std::shared_ptr<Subscription>
SessionRegistry::subscribe(const std::string &id) {
    return find(id)->subscribe();
}

std::size_t SessionRegistry::reap_idle(Clock::time_point now) {
    std::vector<std::shared_ptr<Session>> reaped;
    {
        std::lock_guard lk(mu_);
        for (auto it = sessions_.begin(); it != sessions_.end();) {
            const auto &s = it->second;
            if (now - s->last_activity() > idle_timeout_ &&
                !s->has_subscribers()) {
                reaped.push_back(s);
                it = sessions_.erase(it);
            } else {
                ++it;
            }
        }
    }
    for (auto &s : reaped) {
        s->shutdown();
    }
    return reaped.size();
}

std::size_t SessionRegistry::size() const {
    std::lock_guard lk(mu_);
    return sessions_.size();
}

void SessionRegistry::clear() {
    std::map<std::string, std::shared_ptr<Session>> all;
    {
        std::lock_guard lk(mu_);
        all.swap(sessions_);
    }
    for (auto &[id, s] : all) {
        s->shutdown();
    }
}

} // namespace qplay
