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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

#include <httplib.h>

#include "gtest/gtest.h"

namespace qplay {
namespace {

using nlohmann::json;
using namespace std::chrono_literals;

const char *kSmallConfig =
    R"({"dataset": {"n": 48}, "model": {"layers": 2}, "grid_resolution": 8})";

class ServerTest : public ::testing::Test {
  protected:
    void SetUp() override {
        ServerOptions o;
        o.port = 0;
        o.keepalive = 100ms;
        server_ = std::make_unique<Server>(o);
        port_ = server_->start();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
        client_->set_read_timeout(10, 0);
    }
    void TearDown() override { server_->stop(); }

    std::string create() {
        auto res = client_->Post("/sessions", kSmallConfig, "application/json");
        EXPECT_TRUE(res);
        EXPECT_EQ(res->status, 200);
        return json::parse(res->body).at("session_id").get<std::string>();
    }

    json control(const std::string &id, const json &cmd, int expect = 200) {
        auto res = client_->Post("/sessions/" + id + "/control", cmd.dump(),
                                 "application/json");
        EXPECT_TRUE(res);
        EXPECT_EQ(res->status, expect);
        return json::parse(res->body);
    }

    std::unique_ptr<Server> server_;
    int port_ = 0;
    std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServerTest, CreateReturnsIdAndInitialFrame) {
    const auto id = create();
    auto res = client_->Get("/sessions/" + id + "/snapshot");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const auto frame = json::parse(res->body);
    EXPECT_EQ(frame["session_id"], id);
    EXPECT_EQ(frame["epoch"], 0);
    EXPECT_EQ(frame["step"], 0);
    for (const char *key : {"metrics", "layers", "final", "grid", "config_echo",
                            "history", "class_summary", "targets"}) {
        EXPECT_TRUE(frame.contains(key)) << key;
    }
    for (const char *key : {"train_loss", "train_acc", "test_acc"}) {
        EXPECT_TRUE(frame["metrics"].contains(key)) << key;
    }
    EXPECT_EQ(frame["grid"]["resolution"], 8);
    EXPECT_EQ(frame["grid"]["labels"].size(), 64u);
    const auto &point = frame["layers"][0]["points"][0];
    EXPECT_EQ(point["xyz"].size(), 3u);
    EXPECT_TRUE(point.contains("label"));
    EXPECT_TRUE(point.contains("correct"));
    EXPECT_EQ(frame["final"], frame["layers"].back());
}

TEST_F(ServerTest, InvalidConfigIs422WithFieldErrors) {
    auto res = client_->Post(
        "/sessions", R"({"model": {"qubits": 1, "entangler": "cz", "layers": 0}})",
        "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 422);
    const auto body = json::parse(res->body);
    std::vector<std::string> fields;
    for (const auto &e : body["errors"]) {
        fields.push_back(e["field"]);
        EXPECT_TRUE(e["message"].is_string());
    }
    EXPECT_EQ(fields, (std::vector<std::string>{"model.layers", "model.entangler"}));
}

TEST_F(ServerTest, MalformedJsonIs400) {
    auto res = client_->Post("/sessions", "{nope", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
}

TEST_F(ServerTest, UnknownSessionIs404) {
    for (const char *path : {"/sessions/bad/snapshot", "/sessions/bad/stream"}) {
        auto res = client_->Get(path);
        ASSERT_TRUE(res);
        EXPECT_EQ(res->status, 404) << path;
    }
    auto res = client_->Post("/sessions/bad/control", R"({"command": "start"})",
                             "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
}

TEST_F(ServerTest, ControlTransitions) {
    const auto id = create();
    EXPECT_EQ(control(id, {{"command", "pause"}})["state"], "paused");
    EXPECT_EQ(control(id, {{"command", "step_epoch"}})["state"], "paused");
    auto res = client_->Get("/sessions/" + id + "/snapshot");
    EXPECT_EQ(json::parse(res->body)["epoch"], 1);
    EXPECT_EQ(control(id, {{"command", "start"}})["state"], "running");
    EXPECT_EQ(control(id, {{"command", "pause"}})["state"], "paused");
    EXPECT_EQ(control(id, {{"command", "reset"}})["state"], "paused");
    res = client_->Get("/sessions/" + id + "/snapshot");
    EXPECT_EQ(json::parse(res->body)["epoch"], 0);
    const auto bad = control(id, {{"command", "fly"}}, 422);
    EXPECT_EQ(bad["errors"][0]["field"], "command");
}

TEST_F(ServerTest, StreamDeliversFramesInOrder) {
    const auto id = create();
    std::string received;
    std::atomic<bool> done{false};
    std::thread reader([&] {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(10, 0);
        (void)c.Get("/sessions/" + id + "/stream",
                    [&](const char *data, std::size_t n) {
                        received.append(data, n);
                        const bool complete = received.ends_with("\n\n");
                        return !complete ||
                               received.find("\"epoch\":3") == std::string::npos;
                    });
        done = true;
    });
    // Let the subscription see the epoch-0 frame before training.
    std::this_thread::sleep_for(200ms);
    for (int i = 0; i < 3; ++i) {
        control(id, {{"command", "step_epoch"}});
    }
    reader.join();
    ASSERT_TRUE(done);
    std::vector<int> epochs;
    std::size_t pos = 0;
    while ((pos = received.find("event: frame\ndata: ", pos)) != std::string::npos) {
        pos += 19;
        const auto end = received.find("\n\n", pos);
        ASSERT_NE(end, std::string::npos);
        epochs.push_back(json::parse(received.substr(pos, end - pos))["epoch"]);
        pos = end;
    }
    ASSERT_FALSE(epochs.empty());
    EXPECT_EQ(epochs.front(), 0);
    EXPECT_EQ(epochs.back(), 3);
    EXPECT_TRUE(std::is_sorted(epochs.begin(), epochs.end()));
}

TEST_F(ServerTest, StreamAnnouncesResets) {
    const auto id = create();
    std::string received;
    std::thread reader([&] {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(10, 0);
        (void)c.Get("/sessions/" + id + "/stream",
                    [&](const char *data, std::size_t n) {
                        received.append(data, n);
                        return !received.ends_with("\n\n") ||
                               received.find("event: reset") == std::string::npos ||
                               received.find("\"generation\":1,") == std::string::npos;
                    });
    });
    std::this_thread::sleep_for(200ms);
    control(id, {{"command", "step_epoch"}});
    control(id, {{"command", "reset"}});
    reader.join();
    const auto reset_at = received.find("event: reset");
    ASSERT_NE(reset_at, std::string::npos);
    EXPECT_NE(received.find("\"epoch\":1", 0), std::string::npos);
    EXPECT_LT(received.find("\"epoch\":1"), reset_at);
}

TEST_F(ServerTest, BuiltInPageServedAtRoot) {
    auto res = client_->Get("/");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_NE(res->body.find("<html"), std::string::npos);
    EXPECT_NE(res->body.find("EventSource"), std::string::npos);
}

TEST(ServerUi, ServesDirectoryAtRoot) {
    const auto dir = std::filesystem::temp_directory_path() / "qplay_ui_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "index.html") << "<html>custom ui</html>";
    ServerOptions o;
    o.port = 0;
    o.ui_dir = dir;
    Server server(o);
    const int port = server.start();
    httplib::Client c("127.0.0.1", port);
    auto res = c.Get("/");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, "<html>custom ui</html>");
    res = c.Get("/sessions/bad/snapshot");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 404);
    server.stop();
    std::filesystem::remove_all(dir);
}

TEST(ServerUi, MissingDirectoryFailsToBind) {
    ServerOptions o;
    o.port = 0;
    o.ui_dir = "/nonexistent/qplay-ui";
    Server server(o);
    EXPECT_THROW((void)server.bind(), std::runtime_error);
}

TEST(ServerLifecycle, StopEndsOpenStreamsPromptly) {
    ServerOptions o;
    o.port = 0;
    Server server(o);
    const int port = server.start();
    httplib::Client c("127.0.0.1", port);
    auto res = c.Post("/sessions", kSmallConfig, "application/json");
    ASSERT_TRUE(res);
    const auto id = json::parse(res->body)["session_id"].get<std::string>();
    std::thread reader([&] {
        httplib::Client s("127.0.0.1", port);
        (void)s.Get("/sessions/" + id + "/stream",
                    [](const char *, std::size_t) { return true; });
    });
    std::this_thread::sleep_for(200ms);
    const auto t0 = std::chrono::steady_clock::now();
    server.stop();
    reader.join();
    EXPECT_LT(std::chrono::steady_clock::now() - t0, 5s);
    EXPECT_EQ(server.registry().size(), 0u);
}

} // namespace
} // namespace qplay
