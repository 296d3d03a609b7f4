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

#include "cli.hpp"

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qplay/config.hpp"
#include "qplay/datasets.hpp"
#include "qplay/errors.hpp"
#include "qplay/headless.hpp"
#include "qplay/server.hpp"

namespace qplay::cli {

namespace {

using nlohmann::json;

constexpr int kDefaultEpochs = 50;

struct RunFlags {
    std::string config_path;
    std::optional<std::string> dataset;
    std::optional<int> qubits;
    std::optional<int> layers;
    std::optional<std::string> variant;
    std::optional<std::string> entangler;
    std::optional<int> classes;
    std::optional<double> lr;
    std::optional<int> batch_size;
    std::optional<int> epochs;
    std::optional<std::int64_t> seed;
    std::optional<int> grid_res;
    std::string out = "qplay-run";
};

json flag_overrides(const RunFlags &f) {
    json o = json::object();
    if (f.dataset) {
        o["dataset"]["kind"] = *f.dataset;
    }
    if (f.qubits) {
        o["model"]["qubits"] = *f.qubits;
    }
    if (f.layers) {
        o["model"]["layers"] = *f.layers;
    }
    if (f.variant) {
        o["model"]["variant"] = *f.variant;
    }
    if (f.entangler) {
        o["model"]["entangler"] = *f.entangler;
    }
    if (f.classes) {
        o["model"]["classes"] = *f.classes;
    }
    if (f.lr) {
        o["optimizer"]["lr"] = *f.lr;
    }
    if (f.batch_size) {
        o["optimizer"]["batch_size"] = *f.batch_size;
    }
    if (f.seed) {
        o["seed"] = *f.seed;
    }
    if (f.grid_res) {
        o["grid_resolution"] = *f.grid_res;
    }
    return o;
}

int do_run(const RunFlags &f, std::ostream &out, std::ostream &err) {
    json doc = json::object();
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) {
            err << "config error: cannot read " << f.config_path << "\n";
            return kExitConfigError;
        }
        try {
            doc = json::parse(in);
        } catch (const json::exception &e) {
            err << "config error: " << f.config_path << ": " << e.what()
                << "\n";
            return kExitConfigError;
        }
    }
    doc = merge_config(std::move(doc), flag_overrides(f));

    int epochs = kDefaultEpochs;
    if (f.epochs) {
        epochs = *f.epochs;
    } else if (doc.is_object() && doc.contains("max_epochs") &&
               doc["max_epochs"].is_number_integer() &&
               doc["max_epochs"].get<int>() > 0) {
        epochs = doc["max_epochs"].get<int>();
    }
    const int code = run_headless(doc, epochs, f.out, err);
    if (code == kExitOk) {
        out << "wrote " << f.out << " (" << epochs << " epochs)\n";
    }
    return code;
}

int do_serve(const ServerOptions &options, std::ostream &out,
             std::ostream &err) {
    // Route termination signals to a watcher thread; every thread created
    // after this point inherits the mask.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    Server server(options);
    int port = 0;
    try {
        port = server.bind();
    } catch (const std::exception &e) {
        err << "serve: " << e.what() << "\n";
        pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
        return 1;
    }
    out << "listening on http://" << options.bind << ":" << port << std::endl;

    std::thread watcher([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });
    server.run();
    server.stop();
    if (watcher.joinable()) {
        // A normal return from run() means a signal already arrived.
        watcher.join();
    }
    out << "stopped" << std::endl;
    return 0;
}

int do_dataset(const std::string &kind, int n, std::int64_t seed,
               std::optional<int> classes, double noise,
               const std::string &path, std::ostream &out, std::ostream &err) {
    try {
        const DatasetKind k = parse_dataset_kind(kind);
        if (seed < 0) {
            throw ConfigError("seed must be nonnegative");
        }
        const Dataset ds = generate(k, n, static_cast<std::uint64_t>(seed),
                                    classes.value_or(default_classes(k)),
                                    noise);
        if (path.empty() || path == "-") {
            write_csv(out, ds.samples);
        } else {
            std::ofstream file(path, std::ios::binary);
            if (!file) {
                err << "dataset: cannot write " << path << "\n";
                return kExitRuntimeError;
            }
            write_csv(file, ds.samples);
        }
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}

} // namespace

int main(const std::vector<std::string> &args, std::ostream &out,
         std::ostream &err) {
    CLI::App app{"Data re-uploading quantum classifier playground"};
    app.require_subcommand(1);

    RunFlags rf;
    auto *run = app.add_subcommand("run", "Train headless and write artifacts");
    run->add_option("--config", rf.config_path, "JSON session config file");
    run->add_option("--dataset", rf.dataset, "Dataset kind");
    run->add_option("--qubits", rf.qubits, "1 or 2");
    run->add_option("--layers", rf.layers, "Number of layers");
    run->add_option("--variant", rf.variant, "separate | compact");
    run->add_option("--entangler", rf.entangler, "none | cz | cnot");
    run->add_option("--classes", rf.classes, "Number of classes");
    run->add_option("--lr", rf.lr, "Adam learning rate");
    run->add_option("--batch-size", rf.batch_size, "Mini-batch size");
    run->add_option("--epochs", rf.epochs, "Epochs to train");
    run->add_option("--seed", rf.seed, "Seed for data, init and shuffling");
    run->add_option("--grid-res", rf.grid_res, "Decision grid resolution");
    run->add_option("--out", rf.out, "Output directory")->capture_default_str();

    ServerOptions so;
    std::string ui_dir;
    auto *serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--bind", so.bind, "Address to bind")
        ->capture_default_str();
    serve->add_option("--port", so.port, "Port (0 picks a free one)")
        ->capture_default_str();
    serve->add_option("--ui", ui_dir, "Directory served at /");

    std::string kind;
    int n = 200;
    std::int64_t seed = 42;
    std::optional<int> classes;
    double noise = 0.0;
    std::string csv_path;
    auto *dataset = app.add_subcommand("dataset", "Export a dataset as CSV");
    dataset->add_option("--kind", kind, "Dataset kind")->required();
    dataset->add_option("--n", n, "Samples")->capture_default_str();
    dataset->add_option("--seed", seed, "Seed")->capture_default_str();
    dataset->add_option("--classes", classes, "Number of classes");
    dataset->add_option("--noise", noise, "Label noise probability")
        ->capture_default_str();
    dataset->add_option("--out", csv_path, "Output file (default stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitConfigError;
    }

    if (*run) {
        return do_run(rf, out, err);
    }
    if (*serve) {
        if (!ui_dir.empty()) {
            so.ui_dir = ui_dir;
        }
        return do_serve(so, out, err);
    }
    return do_dataset(kind, n, seed, classes, noise, csv_path, out, err);
}

} // namespace qplay::cli
