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

#include "qplay/config.hpp"

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "qplay/errors.hpp"

namespace qplay {

namespace {

using nlohmann::json;

constexpr int kMaxSamples = 5000;
constexpr int kMaxLayers = 64;

// Reads typed fields of one JSON object, recording problems instead of
// throwing so that every offending field is reported at once.
class FieldReader {
  public:
    FieldReader(const json &obj, std::string prefix,
                std::vector<FieldError> &errors,
                std::set<std::string> known)
        : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {
        if (!obj_.is_object()) {
            fail("", "must be an object");
            return;
        }
        for (const auto &[key, value] : obj_.items()) {
            if (!known.contains(key)) {
                fail(key, "unknown field");
            }
        }
    }

    [[nodiscard]] bool has(const char *key) const {
        return obj_.is_object() && obj_.contains(key) && !obj_.at(key).is_null();
    }

    std::optional<std::int64_t> integer(const char *key) {
        if (!has(key)) {
            return std::nullopt;
        }
        const auto &v = obj_.at(key);
        if (v.is_number_integer()) {
            return v.get<std::int64_t>();
        }
        if (v.is_number_float()) {
            const double d = v.get<double>();
            if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9e15) {
                return static_cast<std::int64_t>(d);
            }
        }
        fail(key, "must be an integer");
        return std::nullopt;
    }

    std::optional<double> number(const char *key) {
        if (!has(key)) {
            return std::nullopt;
        }
        const auto &v = obj_.at(key);
        if (v.is_number()) {
            return v.get<double>();
        }
        fail(key, "must be a number");
        return std::nullopt;
    }

    std::optional<std::string> string(const char *key) {
        if (!has(key)) {
            return std::nullopt;
        }
        const auto &v = obj_.at(key);
        if (v.is_string()) {
            return v.get<std::string>();
        }
        fail(key, "must be a string");
        return std::nullopt;
    }

    std::optional<std::uint64_t> seed(const char *key) {
        auto v = integer(key);
        if (v && *v < 0) {
            fail(key, "must be nonnegative");
            return std::nullopt;
        }
        return v ? std::optional<std::uint64_t>(static_cast<std::uint64_t>(*v))
                 : std::nullopt;
    }

    void fail(const std::string &key, std::string message) {
        std::string path = prefix_;
        if (!key.empty()) {
            path += path.empty() ? key : "." + key;
        }
        errors_.push_back({path.empty() ? "(root)" : path, std::move(message)});
    }

  private:
    const json &obj_;
    std::string prefix_;
    std::vector<FieldError> &errors_;
};

template <class T, class Parse>
std::optional<T> parse_enum(FieldReader &r, const char *key, Parse parse) {
    auto s = r.string(key);
    if (!s) {
        return std::nullopt;
    }
    try {
        return parse(*s);
    } catch (const ConfigError &e) {
        r.fail(key, e.what());
        return std::nullopt;
    }
}

const json kEmptyObject = json::object();

const json &section(const json &doc, const char *key) {
    if (doc.is_object() && doc.contains(key) && !doc.at(key).is_null()) {
        return doc.at(key);
    }
    return kEmptyObject;
}

} // namespace

SessionConfig parse_session_config(const json &doc) {
    std::vector<FieldError> errors;
    SessionConfig c;

    FieldReader root(doc, "", errors,
                     {"dataset", "model", "optimizer", "seed",
                      "grid_resolution", "frames_per_epoch", "max_epochs"});
    if (auto v = root.seed("seed")) {
        c.seed = *v;
    }
    if (auto v = root.integer("grid_resolution")) {
        if (*v < 8 || *v > 200) {
            root.fail("grid_resolution", "must be in [8, 200]");
        } else {
            c.grid_resolution = static_cast<int>(*v);
        }
    }
    if (auto v = root.integer("frames_per_epoch")) {
        if (*v < 1 || *v > 1000) {
            root.fail("frames_per_epoch", "must be in [1, 1000]");
        } else {
            c.frames_per_epoch = static_cast<int>(*v);
        }
    }
    if (auto v = root.integer("max_epochs")) {
        if (*v < 0 || *v > 1000000) {
            root.fail("max_epochs", "must be in [0, 1000000]");
        } else {
            c.max_epochs = static_cast<int>(*v);
        }
    }

    FieldReader ds(section(doc, "dataset"), "dataset", errors,
                   {"kind", "n", "seed", "noise", "test_fraction"});
    if (auto v = parse_enum<DatasetKind>(ds, "kind", parse_dataset_kind)) {
        c.dataset.kind = *v;
    }
    if (auto v = ds.integer("n")) {
        if (*v < 8 || *v > kMaxSamples) {
            ds.fail("n", "must be in [8, " + std::to_string(kMaxSamples) + "]");
        } else {
            c.dataset.n = static_cast<int>(*v);
        }
    }
    c.dataset.seed = ds.seed("seed").value_or(c.seed);
    if (auto v = ds.number("noise")) {
        if (!(*v >= 0.0 && *v <= 0.5)) {
            ds.fail("noise", "must be in [0, 0.5]");
        } else {
            c.dataset.noise = *v;
        }
    }
    if (auto v = ds.number("test_fraction")) {
        if (!(*v > 0.0 && *v < 1.0)) {
            ds.fail("test_fraction", "must be in (0, 1)");
        } else {
            c.dataset.test_fraction = *v;
        }
    }

    FieldReader model(section(doc, "model"), "model", errors,
                      {"qubits", "layers", "variant", "entangler", "classes"});
    if (auto v = model.integer("qubits")) {
        if (*v != 1 && *v != 2) {
            model.fail("qubits", "must be 1 or 2");
        } else {
            c.model.n_qubits = static_cast<int>(*v);
        }
    }
    if (auto v = model.integer("layers")) {
        if (*v < 1 || *v > kMaxLayers) {
            model.fail("layers",
                       "must be in [1, " + std::to_string(kMaxLayers) + "]");
        } else {
            c.model.n_layers = static_cast<int>(*v);
        }
    }
    if (auto v = parse_enum<Variant>(model, "variant", parse_variant)) {
        c.model.variant = *v;
    }
    c.model.entangler =
        c.model.n_qubits == 2 ? Entangler::CZ : Entangler::None;
    if (auto v = parse_enum<Entangler>(model, "entangler", parse_entangler)) {
        if (c.model.n_qubits == 1 && *v != Entangler::None) {
            model.fail("entangler", "single-qubit models have no entangler");
        } else {
            c.model.entangler = *v;
        }
    }
    c.model.n_classes = default_classes(c.dataset.kind);
    if (auto v = model.integer("classes")) {
        if (*v < 2 || *v > 4) {
            model.fail("classes", "must be in [2, 4]");
        } else if (!supports_classes(c.dataset.kind, static_cast<int>(*v))) {
            model.fail("classes", "dataset '" +
                                      std::string(to_string(c.dataset.kind)) +
                                      "' does not provide " +
                                      std::to_string(*v) + " classes");
        } else {
            c.model.n_classes = static_cast<int>(*v);
        }
    }

    FieldReader opt(section(doc, "optimizer"), "optimizer", errors,
                    {"lr", "batch_size"});
    if (auto v = opt.number("lr")) {
        if (!(*v >= 0.0 && *v <= 10.0)) {
            opt.fail("lr", "must be in [0, 10]");
        } else {
            c.lr = *v;
        }
    }
    if (auto v = opt.integer("batch_size")) {
        if (*v < 1 || *v > kMaxSamples) {
            opt.fail("batch_size", "must be in [1, " +
                                       std::to_string(kMaxSamples) + "]");
        } else {
            c.batch_size = static_cast<int>(*v);
        }
    }

    if (!errors.empty()) {
        throw ValidationError(std::move(errors));
    }
    return c;
}

json to_json(const SessionConfig &c) {
    return {
        {"dataset",
         {{"kind", std::string(to_string(c.dataset.kind))},
          {"n", c.dataset.n},
          {"seed", c.dataset.seed},
          {"noise", c.dataset.noise},
          {"test_fraction", c.dataset.test_fraction}}},
        {"model",
         {{"qubits", c.model.n_qubits},
          {"layers", c.model.n_layers},
          {"variant", std::string(to_string(c.model.variant))},
          {"entangler", std::string(to_string(c.model.entangler))},
          {"classes", c.model.n_classes}}},
        {"optimizer", {{"lr", c.lr}, {"batch_size", c.batch_size}}},
        {"seed", c.seed},
        {"grid_resolution", c.grid_resolution},
        {"frames_per_epoch", c.frames_per_epoch},
        {"max_epochs", c.max_epochs},
    };
}

json merge_config(json base, const json &overrides) {
    if (base.is_null()) {
        base = json::object();
    }
    base.merge_patch(overrides);
    return base;
}

ControlCommand parse_control_command(const json &doc) {
    std::vector<FieldError> errors;
    FieldReader r(doc, "", errors, {"command", "seed", "lr", "batch_size"});
    auto name = r.string("command");
    if (!name && errors.empty()) {
        r.fail("command", "is required");
    }
    auto reject_extras = [&](std::initializer_list<const char *> keys) {
        for (const char *k : keys) {
            if (r.has(k)) {
                r.fail(k, "not accepted by '" + name.value_or("") + "'");
            }
        }
    };
    std::optional<ControlCommand> cmd;
    if (name) {
        if (*name == "start") {
            reject_extras({"seed", "lr", "batch_size"});
            cmd = command::Start{};
        } else if (*name == "pause") {
            reject_extras({"seed", "lr", "batch_size"});
            cmd = command::Pause{};
        } else if (*name == "step_epoch") {
            reject_extras({"seed", "lr", "batch_size"});
            cmd = command::StepEpoch{};
        } else if (*name == "step_batch") {
            reject_extras({"seed", "lr", "batch_size"});
            cmd = command::StepBatch{};
        } else if (*name == "reset") {
            reject_extras({"lr", "batch_size"});
            cmd = command::Reset{r.seed("seed")};
        } else if (*name == "update_hyper") {
            reject_extras({"seed"});
            command::UpdateHyper u;
            if (auto lr = r.number("lr")) {
                if (!(*lr >= 0.0 && *lr <= 10.0)) {
                    r.fail("lr", "must be in [0, 10]");
                } else {
                    u.lr = *lr;
                }
            }
            if (auto bs = r.integer("batch_size")) {
                if (*bs < 1 || *bs > kMaxSamples) {
                    r.fail("batch_size", "must be in [1, " +
                                             std::to_string(kMaxSamples) + "]");
                } else {
                    u.batch_size = static_cast<int>(*bs);
                }
            }
            if (!r.has("lr") && !r.has("batch_size")) {
                r.fail("command", "update_hyper needs lr or batch_size");
            }
            cmd = u;
        } else {
            r.fail("command", "unknown command '" + *name + "'");
        }
    }
    if (!errors.empty() || !cmd) {
        throw ValidationError(std::move(errors));
    }
    return *cmd;
}

json to_json(const ControlCommand &cmd) {
    return std::visit(
        [](const auto &c) -> json {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, command::Start>) {
                return {{"command", "start"}};
            } else if constexpr (std::is_same_v<T, command::Pause>) {
                return {{"command", "pause"}};
            } else if constexpr (std::is_same_v<T, command::StepEpoch>) {
                return {{"command", "step_epoch"}};
            } else if constexpr (std::is_same_v<T, command::StepBatch>) {
                return {{"command", "step_batch"}};
            } else if constexpr (std::is_same_v<T, command::Reset>) {
                json j{{"command", "reset"}};
                if (c.seed) {
                    j["seed"] = *c.seed;
                }
                return j;
            } else {
                json j{{"command", "update_hyper"}};
                if (c.lr) {
                    j["lr"] = *c.lr;
                }
                if (c.batch_size) {
                    j["batch_size"] = *c.batch_size;
                }
                return j;
            }
        },
        cmd);
}

} // namespace qplay
