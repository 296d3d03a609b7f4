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

#include "qplay/frame.hpp"

#include <variant>

#include "qplay/datasets.hpp"

namespace qplay {

using nlohmann::json;

std::string_view to_string(SessionState state) {
    switch (state) {
    case SessionState::Paused:
        return "paused";
    case SessionState::Running:
        return "running";
    case SessionState::Finished:
        return "finished";
    }
    return "paused";
}

namespace {

json to_json(const Vec3 &v) { return json::array({v[0], v[1], v[2]}); }

json to_json(const FramePoint &p) {
    json j{{"xyz", to_json(p.xyz)},
           {"label", p.label},
           {"correct", p.correct},
           {"input", json::array({p.input_x, p.input_y})},
           {"test", p.test}};
    if (p.size) {
        j["size"] = *p.size;
    }
    if (p.hue) {
        j["hue"] = *p.hue;
    }
    return j;
}

json to_json(const FrameLayer &layer) {
    json points = json::array();
    for (const auto &p : layer.points) {
        points.push_back(to_json(p));
    }
    return {{"points", std::move(points)}};
}

json to_json(const EpochMetrics &m) {
    return {{"epoch", m.epoch},
            {"train_loss", m.train_loss},
            {"train_loss_sum", m.train_loss_sum},
            {"train_acc", m.train_accuracy},
            {"test_acc", m.test_accuracy}};
}

} // namespace

json to_json(const Frame &f) {
    json metrics{{"train_loss", f.metrics.train_loss},
                 {"train_loss_sum", f.metrics.train_loss_sum},
                 {"train_acc", f.metrics.train_acc},
                 {"test_acc", f.metrics.test_acc}};
    if (f.metrics.batch_loss) {
        metrics["batch_loss"] = *f.metrics.batch_loss;
    }
    json history = json::array();
    for (const auto &m : f.history) {
        history.push_back(to_json(m));
    }
    json layers = json::array();
    for (const auto &l : f.layers) {
        layers.push_back(to_json(l));
    }
    json targets = json::array();
    for (const auto &t : f.targets) {
        targets.push_back(to_json(t));
    }
    return {
        {"session_id", f.session_id},
        {"generation", f.generation},
        {"epoch", f.epoch},
        {"step", f.step},
        {"state", std::string(to_string(f.state))},
        {"metrics", std::move(metrics)},
        {"history", std::move(history)},
        {"geometry", f.geometry},
        {"layers", layers},
        {"final", layers.empty() ? json::object() : layers.back()},
        {"grid",
         {{"resolution", f.grid.resolution},
          {"labels", f.grid.labels},
          {"scores", f.grid.scores},
          {"truth", f.grid.truth}}},
        {"class_summary", f.class_summary},
        {"targets", std::move(targets)},
        {"config_echo", f.config_echo},
    };
}

Trainer make_trainer(const SessionConfig &config) {
    config.model.validate();
    const auto &d = config.dataset;
    Dataset data =
        generate(d.kind, d.n, d.seed, config.model.n_classes, d.noise);
    Split parts = split(data, d.test_fraction, d.seed);
    return Trainer(config.model, std::move(parts.train), std::move(parts.test),
                   TrainOptions{config.lr, config.batch_size, config.seed});
}

FrameBuilder::FrameBuilder(SessionConfig config)
    : config_(std::move(config)), config_echo_(qplay::to_json(config_)),
      truth_(ground_truth_grid(config_.dataset.kind, config_.model.n_classes,
                               config_.grid_resolution)) {}

Frame FrameBuilder::build(const Trainer &trainer,
                          const std::string &session_id,
                          std::uint64_t generation, SessionState state,
                          std::optional<double> batch_loss) const {
    const Model &model = trainer.model();
    const ParameterSet &params = trainer.params();
    const auto train = trainer.train_set();
    const auto test = trainer.test_set();
    const int n_classes = model.config().n_classes;

    std::vector<const Sample *> samples;
    samples.reserve(train.size() + test.size());
    for (const auto &s : train) {
        samples.push_back(&s);
    }
    for (const auto &s : test) {
        samples.push_back(&s);
    }
    std::vector<ForwardTrace> traces;
    std::vector<int> labels;
    std::vector<int> predictions;
    traces.reserve(samples.size());
    for (const Sample *s : samples) {
        traces.push_back(forward(model, params, features(*s)));
        labels.push_back(s->label);
        predictions.push_back(argmax_label(traces.back().class_scores));
    }

    Frame f;
    f.session_id = session_id;
    f.generation = generation;
    f.epoch = trainer.epoch();
    f.step = trainer.step();
    f.state = state;

    const EpochMetrics m = trainer.evaluate();
    f.metrics = {m.train_loss, m.train_loss_sum, m.train_accuracy,
                 m.test_accuracy, batch_loss};
    f.history = trainer.history();

    const auto clouds =
        layer_point_clouds(traces, labels, predictions, config_.seed);
    const auto shown =
        display_subset(traces.size(), config_.seed, kDisplayPointLimit);
    f.layers.reserve(clouds.size());
    for (const auto &cloud : clouds) {
        FrameLayer layer;
        layer.points.reserve(shown.size());
        std::visit(
            [&](const auto &points) {
                for (std::size_t k = 0; k < points.size(); ++k) {
                    const Sample &s = *samples[shown[k]];
                    FramePoint p;
                    p.label = points[k].class_label;
                    p.correct = points[k].correct;
                    p.input_x = s.x;
                    p.input_y = s.y;
                    p.test = shown[k] >= train.size();
                    using P = std::decay_t<decltype(points[k])>;
                    if constexpr (std::is_same_v<P, SimplexPoint>) {
                        p.xyz = points[k].p;
                        p.size = points[k].concurrence_size;
                        p.hue = points[k].phase_hue;
                    } else {
                        p.xyz = points[k].xyz;
                    }
                    layer.points.push_back(p);
                }
            },
            cloud);
        f.layers.push_back(std::move(layer));
    }

    const DecisionGrid grid =
        decision_grid(model, params, config_.grid_resolution);
    f.grid = {grid.resolution, grid.labels, grid.scores, truth_};

    f.class_summary.assign(static_cast<std::size_t>(n_classes),
                           std::vector<double>(n_classes, 0.0));
    std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
    for (std::size_t i = 0; i < train.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        ++counts[c];
        for (int k = 0; k < n_classes; ++k) {
            f.class_summary[c][static_cast<std::size_t>(k)] +=
                traces[i].class_scores[static_cast<std::size_t>(k)];
        }
    }
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0) {
            for (double &v : f.class_summary[c]) {
                v /= counts[c];
            }
        }
    }

    if (model.uses_target_readout()) {
        f.geometry = "bloch";
        for (const auto &t : model.targets().states) {
            f.targets.push_back(bloch_coordinates(t));
        }
    } else {
        f.geometry = "simplex";
        const auto vertices = default_simplex_vertices();
        f.targets.assign(vertices.begin(), vertices.end());
    }
    f.config_echo = config_echo_;
    return f;
}

} // namespace qplay
