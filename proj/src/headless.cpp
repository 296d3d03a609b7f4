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

#include "qplay/headless.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <system_error>

#include "qplay/errors.hpp"
#include "qplay/frame.hpp"

namespace qplay {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {

// Files are written under temporary names and renamed once complete.
class ArtifactFile {
  public:
    ArtifactFile(const fs::path &dir, const char *name)
        : final_(dir / name), temp_(dir / (std::string(name) + ".partial")),
          out_(temp_, std::ios::binary | std::ios::trunc) {
        if (!out_) {
            throw std::runtime_error("cannot write " + temp_.string());
        }
    }
    ~ArtifactFile() {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            fs::remove(temp_, ec);
        }
    }
    std::ofstream &stream() { return out_; }
    void commit() {
        out_.close();
        if (!out_) {
            throw std::runtime_error("error writing " + temp_.string());
        }
        fs::rename(temp_, final_);
        committed_ = true;
    }

  private:
    fs::path final_;
    fs::path temp_;
    std::ofstream out_;
    bool committed_ = false;
};

} // namespace

int run_headless(const nlohmann::json &config_doc, int epochs,
                 const fs::path &out_dir, std::ostream &err) {
    SessionConfig config;
    try {
        config = parse_session_config(config_doc);
    } catch (const ValidationError &e) {
        err << "config error:\n";
        for (const auto &f : e.errors()) {
            err << "  " << f.field << ": " << f.message << "\n";
        }
        return kExitConfigError;
    }
    return run_headless(config, epochs, out_dir, err);
}

int run_headless(const SessionConfig &config, int epochs,
                 const fs::path &out_dir, std::ostream &err) {
    if (epochs < 1) {
        err << "config error:\n  epochs: must be at least 1\n";
        return kExitConfigError;
    }
    std::optional<Trainer> trainer;
    std::optional<FrameBuilder> builder;
    try {
        trainer.emplace(make_trainer(config));
        builder.emplace(config);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        fs::create_directories(out_dir);
        ArtifactFile metrics(out_dir, "metrics.csv");
        ArtifactFile frames(out_dir, "frames.jsonl");
        ArtifactFile params(out_dir, "params.json");

        const auto emit = [&](std::optional<double> batch_loss) {
            frames.stream()
                << to_json(builder->build(*trainer, "headless", 0,
                                          SessionState::Running, batch_loss))
                       .dump()
                << '\n';
        };

        metrics.stream() << "epoch,train_loss,train_acc,test_acc\n";
        emit(std::nullopt);
        const auto n = trainer->train_set().size();
        const auto per = static_cast<std::size_t>(config.frames_per_epoch);
        for (int e = 0; e < epochs; ++e) {
            for (;;) {
                const auto before = trainer->epoch_cursor();
                const BatchResult r = trainer->step_batch();
                if (r.epoch_metrics) {
                    const auto &m = *r.epoch_metrics;
                    metrics.stream() << m.epoch << ',' << format_double(m.train_loss)
                                     << ',' << format_double(m.train_accuracy)
                                     << ',' << format_double(m.test_accuracy)
                                     << '\n';
                    emit(r.batch_loss);
                    break;
                }
                if ((trainer->epoch_cursor() * per) / n > (before * per) / n) {
                    emit(r.batch_loss);
                }
            }
        }

        const nlohmann::json dump{
            {"config", to_json(config)},
            {"epochs", epochs},
            {"param_count", trainer->params().size()},
            {"params", std::vector<double>(trainer->params().values().begin(),
                                        trainer->params().values().end())},
        };
        params.stream() << dump.dump(2) << '\n';

        metrics.commit();
        frames.commit();
        params.commit();
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntimeError;
    }
    return kExitOk;
}

} // namespace qplay
