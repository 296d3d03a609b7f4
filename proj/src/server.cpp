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

#include "qplay/server.hpp"

#include <condition_variable>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "qplay/errors.hpp"

namespace qplay {

using nlohmann::json;

namespace {

constexpr std::chrono::milliseconds kStreamPoll{200};

void send_json(httplib::Response &res, int status, const json &body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json field_errors(const ValidationError &e) {
    json errors = json::array();
    for (const auto &f : e.errors()) {
        errors.push_back({{"field", f.field}, {"message", f.message}});
    }
    return {{"errors", std::move(errors)}};
}

json parse_body(const httplib::Request &req) {
    if (req.body.find_first_not_of(" \t\r\n") == std::string::npos) {
        return json::object();
    }
    return json::parse(req.body);
}

// Runs `handler`, mapping library errors onto HTTP statuses.
template <class F>
void guarded(httplib::Response &res, F &&handler) {
    try {
        handler();
    } catch (const json::exception &e) {
        send_json(res, 400, {{"error", std::string("malformed JSON: ") + e.what()}});
    } catch (const NotFoundError &e) {
        send_json(res, 404, {{"error", e.what()}});
    } catch (const ValidationError &e) {
        send_json(res, 422, field_errors(e));
    } catch (const ConfigError &e) {
        send_json(res, 422,
                  {{"errors", json::array({{{"field", "(config)"},
                                            {"message", e.what()}}})}});
    } catch (const std::exception &e) {
        send_json(res, 500, {{"error", e.what()}});
    }
}

bool write_text(httplib::DataSink &sink, const std::string &s) {
    return sink.write(s.data(), s.size());
}

} // namespace

struct Server::Impl {
    explicit Impl(ServerOptions o)
        : options(std::move(o)), registry(options.idle_timeout) {}

    ServerOptions options;
    SessionRegistry registry;
    httplib::Server http;
    std::atomic<bool> stopping{false};
    bool bound = false;
    std::thread listener;
    std::thread reaper;
    std::mutex reaper_mu;
    std::condition_variable reaper_cv;

    void install_routes();
    void stream(const std::string &id, httplib::Response &res);
    void reap_loop();
};

void Server::Impl::install_routes() {
    http.new_task_queue = [] { return new httplib::ThreadPool(32); };
    // SO_REUSEADDR only: the library default SO_REUSEPORT would let two
    // servers share a port silently.
    http.set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });

    http.Post("/sessions", [this](const httplib::Request &req,
                                  httplib::Response &res) {
        guarded(res, [&] {
            const SessionConfig config = parse_session_config(parse_body(req));
            send_json(res, 200, {{"session_id", registry.create(config)}});
        });
    });

    http.Post(R"(/sessions/([^/]+)/control)",
              [this](const httplib::Request &req, httplib::Response &res) {
                  guarded(res, [&] {
                      const std::string id = req.matches[1];
                      auto session = registry.find(id);
                      const auto cmd = parse_control_command(parse_body(req));
                      const auto state = session->control(cmd);
                      send_json(res, 200,
                                {{"state", std::string(to_string(state))}});
                  });
              });

    http.Get(R"(/sessions/([^/]+)/snapshot)",
             [this](const httplib::Request &req, httplib::Response &res) {
                 guarded(res, [&] {
                     send_json(res, 200,
                               to_json(*registry.snapshot(req.matches[1])));
                 });
             });

    http.Get(R"(/sessions/([^/]+)/stream)",
             [this](const httplib::Request &req, httplib::Response &res) {
                 guarded(res, [&] { stream(req.matches[1], res); });
             });

    if (!options.ui_dir) {
        http.Get("/", [](const httplib::Request &, httplib::Response &res) {
            res.set_content(builtin_ui_page(), "text/html; charset=utf-8");
        });
    }
}

void Server::Impl::stream(const std::string &id, httplib::Response &res) {
    struct State {
        std::shared_ptr<Subscription> sub;
        Clock::time_point last_write = Clock::now();
        bool announce = false;
    };
    auto st = std::make_shared<State>();
    st->sub = registry.subscribe(id);
    res.set_header("Cache-Control", "no-cache");
    res.set_header("X-Accel-Buffering", "no");
    res.set_chunked_content_provider(
        "text/event-stream",
        [this, id, st](std::size_t, httplib::DataSink &sink) {
            if (stopping.load()) {
                return false;
            }
            if (FramePtr frame = st->sub->next(kStreamPoll)) {
                std::string msg;
                if (st->announce) {
                    msg += "event: reset\ndata: " +
                           json{{"generation", frame->generation}}.dump() +
                           "\n\n";
                    st->announce = false;
                }
                msg += "event: frame\ndata: " + to_json(*frame).dump() + "\n\n";
                st->last_write = Clock::now();
                return write_text(sink, msg);
            }
            if (st->sub->finished()) {
                std::shared_ptr<Subscription> fresh;
                try {
                    fresh = registry.subscribe(id);
                } catch (const NotFoundError &) {
                }
                if (!fresh || fresh->generation() == st->sub->generation()) {
                    write_text(sink, "event: end\ndata: {}\n\n");
                    sink.done();
                    return true;
                }
                st->sub = std::move(fresh);
                st->announce = true;
                return true;
            }
            if (Clock::now() - st->last_write >= options.keepalive) {
                st->last_write = Clock::now();
                return write_text(sink, ": keepalive\n\n");
            }
            return true;
        });
}

void Server::Impl::reap_loop() {
    std::unique_lock lk(reaper_mu);
    while (!stopping.load()) {
        reaper_cv.wait_for(lk, options.reap_interval,
                           [this] { return stopping.load(); });
        if (!stopping.load()) {
            registry.reap_idle(Clock::now());
        }
    }
}

Server::Server(ServerOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {
    impl_->install_routes();
}

Server::~Server() { stop(); }

int Server::bind() {
    auto &o = impl_->options;
    if (o.ui_dir) {
        if (!std::filesystem::is_directory(*o.ui_dir) ||
            !impl_->http.set_mount_point("/", o.ui_dir->string())) {
            throw std::runtime_error("UI directory not found: " +
                                     o.ui_dir->string());
        }
    }
    int port = o.port;
    if (port == 0) {
        port = impl_->http.bind_to_any_port(o.bind);
        if (port < 0) {
            throw std::runtime_error("cannot bind to " + o.bind);
        }
    } else if (!impl_->http.bind_to_port(o.bind, port)) {
        throw std::runtime_error("cannot bind to " + o.bind + ":" +
                                 std::to_string(port));
    }
    impl_->bound = true;
    impl_->reaper = std::thread([this] { impl_->reap_loop(); });
    return port;
}

void Server::run() {
    if (!impl_->bound) {
        throw std::logic_error("Server::run before bind");
    }
    impl_->http.listen_after_bind();
}

int Server::start() {
    const int port = bind();
    impl_->listener = std::thread([this] { run(); });
    impl_->http.wait_until_ready();
    return port;
}

void Server::stop() {
    if (impl_->stopping.exchange(true)) {
        if (impl_->listener.joinable() &&
            impl_->listener.get_id() != std::this_thread::get_id()) {
            impl_->listener.join();
        }
        return;
    }
    impl_->reaper_cv.notify_all();
    impl_->http.stop();
    if (impl_->listener.joinable()) {
        impl_->listener.join();
    }
    if (impl_->reaper.joinable()) {
        impl_->reaper.join();
    }
    impl_->registry.clear();
}

SessionRegistry &Server::registry() noexcept { return impl_->registry; }

const std::string &builtin_ui_page() {
    static const std::string page = R"html(<!doctype html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>QML playground</title>
<style>
body { font-family: sans-serif; margin: 1.5em; max-width: 60em; }
textarea { width: 100%; height: 9em; font-family: monospace; }
button { margin-right: .4em; }
canvas { border: 1px solid #999; image-rendering: pixelated; }
#metrics { font-family: monospace; white-space: pre; }
</style>
</head>
<body>
<h1>QML playground</h1>
<p>Minimal built-in page. Serve a UI directory with <code>--ui</code> for the full client.</p>
<textarea id="config">{"dataset": {"kind": "circle"}, "model": {"qubits": 1, "layers": 6}}</textarea>
<p>
<button id="create">Create session</button>
<button data-cmd="start">Start</button>
<button data-cmd="pause">Pause</button>
<button data-cmd="step_epoch">Step epoch</button>
<button data-cmd="step_batch">Step batch</button>
<button data-cmd="reset">Reset</button>
</p>
<p id="status">no session</p>
<canvas id="grid" width="240" height="240"></canvas>
<div id="metrics"></div>
<script>
let sid = null, source = null;
const palette = [[70,120,220],[220,90,70],[80,170,90],[200,160,40]];
const status = (t) => { document.getElementById('status').textContent = t; };
function draw(frame) {
  const g = frame.grid, n = g.resolution, c = document.getElementById('grid');
  const ctx = c.getContext('2d'), img = ctx.createImageData(n, n);
  for (let r = 0; r < n; ++r) for (let k = 0; k < n; ++k) {
    const cell = r * n + k, px = ((n - 1 - r) * n + k) * 4;
    const col = palette[g.labels[cell] % 4], a = 0.35 + 0.65 * g.scores[cell];
    img.data[px] = col[0]; img.data[px + 1] = col[1]; img.data[px + 2] = col[2];
    img.data[px + 3] = Math.round(255 * a);
  }
  const tmp = document.createElement('canvas'); tmp.width = n; tmp.height = n;
  tmp.getContext('2d').putImageData(img, 0, 0);
  ctx.clearRect(0, 0, c.width, c.height);
  ctx.drawImage(tmp, 0, 0, c.width, c.height);
  const m = frame.metrics;
  document.getElementById('metrics').textContent =
    `epoch ${frame.epoch}  step ${frame.step}  state ${frame.state}\n` +
    `train loss ${m.train_loss.toFixed(4)}  train acc ${m.train_acc.toFixed(3)}  test acc ${m.test_acc.toFixed(3)}`;
}
document.getElementById('create').onclick = async () => {
  const r = await fetch('/sessions', {method: 'POST', body: document.getElementById('config').value});
  const body = await r.json();
  if (!r.ok) { status(JSON.stringify(body.errors || body)); return; }
  sid = body.session_id; status('session ' + sid);
  if (source) source.close();
  source = new EventSource(`/sessions/${sid}/stream`);
  source.addEventListener('frame', (e) => draw(JSON.parse(e.data)));
};
for (const b of document.querySelectorAll('button[data-cmd]')) {
  b.onclick = async () => {
    if (!sid) return;
    const r = await fetch(`/sessions/${sid}/control`, {method: 'POST', body: JSON.stringify({command: b.dataset.cmd})});
    const body = await r.json();
    status(`session ${sid}: ${body.state || JSON.stringify(body)}`);
  };
}
</script>
</body>
</html>
)html";
    return page;
}

} // namespace qplay
