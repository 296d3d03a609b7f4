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

// Python bindings for the simulator, model, training loop, datasets,
// geometry, headless runs and the HTTP server.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qplay/config.hpp"
#include "qplay/datasets.hpp"
#include "qplay/errors.hpp"
#include "qplay/headless.hpp"
#include "qplay/model.hpp"
#include "qplay/qstate.hpp"
#include "qplay/server.hpp"
#include "qplay/train.hpp"
#include "qplay/viz.hpp"

#include <sstream>

namespace py = pybind11;
using namespace qplay;

namespace {

std::vector<double> to_vector(std::span<const double> s) {
    return {s.begin(), s.end()};
}

std::vector<Complex> to_vector(std::span<const Complex> s) {
    return {s.begin(), s.end()};
}

Mat2 mat_from_rows(const std::array<std::array<Complex, 2>, 2> &rows) {
    Mat2 m;
    m(0, 0) = rows[0][0];
    m(0, 1) = rows[0][1];
    m(1, 0) = rows[1][0];
    m(1, 1) = rows[1][1];
    return m;
}

std::array<std::array<Complex, 2>, 2> mat_to_rows(const Mat2 &m) {
    return {{{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}};
}

py::dict epoch_metrics_dict(const EpochMetrics &m) {
    py::dict d;
    d["epoch"] = m.epoch;
    d["train_loss"] = m.train_loss;
    d["train_loss_sum"] = m.train_loss_sum;
    d["train_acc"] = m.train_accuracy;
    d["test_acc"] = m.test_accuracy;
    return d;
}

} // namespace

PYBIND11_MODULE(_qplay, m) {
    m.doc() = "Data re-uploading quantum classifier core";

    py::register_exception<ValidationError>(m, "ValidationError",
                                            PyExc_ValueError);
    py::register_exception<NotFoundError>(m, "NotFoundError", PyExc_KeyError);

    // qstate
    py::class_<StateVector>(m, "StateVector")
        .def(py::init<int>(), py::arg("n_qubits"))
        .def_static("from_amplitudes", &StateVector::from_amplitudes,
                    py::arg("n_qubits"), py::arg("amplitudes"))
        .def_static("basis", &StateVector::basis, py::arg("n_qubits"),
                    py::arg("index"))
        .def_property_readonly("n_qubits", &StateVector::n_qubits)
        .def_property_readonly("dim", &StateVector::dim)
        .def_property_readonly("amplitudes",
                               [](const StateVector &s) {
                                   return to_vector(s.amplitudes());
                               })
        .def("norm_squared", &StateVector::norm_squared)
        .def("__len__", &StateVector::dim)
        .def("__getitem__",
             [](const StateVector &s, std::size_t k) {
                 if (k >= s.dim()) {
                     throw py::index_error("amplitude index out of range");
                 }
                 return s[k];
             })
        .def("__eq__", [](const StateVector &a, const StateVector &b) {
            return a == b;
        });

    m.def("zero_state", &new_zero_state, py::arg("n_qubits"));
    m.def(
        "apply_gate",
        [](const StateVector &s,
           const std::array<std::array<Complex, 2>, 2> &gate, int target) {
            return apply_single_qubit_gate(s, mat_from_rows(gate), target);
        },
        py::arg("state"), py::arg("gate"), py::arg("target"),
        "Apply a 2x2 unitary given as [[a, b], [c, d]] to one qubit.");
    m.def("apply_cx", &apply_cx, py::arg("state"), py::arg("control"),
          py::arg("target"));
    m.def("apply_cz", &apply_cz, py::arg("state"), py::arg("control"),
          py::arg("target"));
    m.def("probabilities", &probabilities, py::arg("state"));
    m.def("fidelity", &fidelity, py::arg("a"), py::arg("b"));
    m.def("concurrence", &concurrence, py::arg("state"));

    auto g = m.def_submodule("gates", "Single-qubit gates as 2x2 lists");
    g.def("pauli_x", [] { return mat_to_rows(gates::pauli_x()); });
    g.def("pauli_y", [] { return mat_to_rows(gates::pauli_y()); });
    g.def("pauli_z", [] { return mat_to_rows(gates::pauli_z()); });
    g.def("hadamard", [] { return mat_to_rows(gates::hadamard()); });
    g.def("ry", [](double t) { return mat_to_rows(gates::ry(t)); },
          py::arg("theta"));
    g.def("rz", [](double l) { return mat_to_rows(gates::rz(l)); },
          py::arg("lam"));
    g.def("rotation",
          [](double phi, double theta, double omega) {
              return mat_to_rows(rotation_gate(phi, theta, omega));
          },
          py::arg("phi"), py::arg("theta"), py::arg("omega"));

    // model
    py::enum_<Variant>(m, "Variant")
        .value("SEPARATE", Variant::Separate)
        .value("COMPACT", Variant::Compact);
    py::enum_<Entangler>(m, "Entangler")
        .value("NONE", Entangler::None)
        .value("CZ", Entangler::CZ)
        .value("CNOT", Entangler::CNOT);

    py::class_<ModelConfig>(m, "ModelConfig")
        .def(py::init([](int qubits, int layers, Variant variant,
                         Entangler entangler, int classes) {
                 ModelConfig c{qubits, layers, variant, entangler, classes};
                 c.validate();
                 return c;
             }),
             py::arg("qubits") = 1, py::arg("layers") = 1,
             py::arg("variant") = Variant::Compact,
             py::arg("entangler") = Entangler::None, py::arg("classes") = 2)
        .def_readonly("qubits", &ModelConfig::n_qubits)
        .def_readonly("layers", &ModelConfig::n_layers)
        .def_readonly("variant", &ModelConfig::variant)
        .def_readonly("entangler", &ModelConfig::entangler)
        .def_readonly("classes", &ModelConfig::n_classes)
        .def("param_count", &ModelConfig::param_count);

    py::class_<ParameterSet>(m, "ParameterSet")
        .def(py::init<const ModelConfig &, std::vector<double>>(),
             py::arg("config"), py::arg("values"))
        .def_property_readonly("values",
                               [](const ParameterSet &p) {
                                   return to_vector(p.values());
                               })
        .def("__len__", &ParameterSet::size);

    py::class_<Model>(m, "Model")
        .def(py::init<ModelConfig>(), py::arg("config"))
        .def_property_readonly("config", &Model::config)
        .def_property_readonly("targets", [](const Model &md) {
            return md.targets().states;
        });

    m.def("build_model", &build_model, py::arg("config"), py::arg("seed"));

    py::class_<ForwardTrace>(m, "ForwardTrace")
        .def_readonly("per_layer_states", &ForwardTrace::per_layer_states)
        .def_readonly("final_state", &ForwardTrace::final_state)
        .def_readonly("class_scores", &ForwardTrace::class_scores);

    m.def("forward", &forward, py::arg("model"), py::arg("params"),
          py::arg("x"));
    m.def(
        "predict",
        [](const Model &md, const ParameterSet &p, const FeatureVector &x) {
            const auto r = predict(md, p, x);
            return py::make_tuple(r.label, r.scores);
        },
        py::arg("model"), py::arg("params"), py::arg("x"),
        "Returns (label, scores).");

    // datasets
    py::enum_<DatasetKind>(m, "DatasetKind")
        .value("CIRCLE", DatasetKind::Circle)
        .value("ANNULUS", DatasetKind::Annulus)
        .value("XOR", DatasetKind::XOR)
        .value("MOONS", DatasetKind::Moons)
        .value("SPIRAL", DatasetKind::Spiral)
        .value("THREE_BLOBS", DatasetKind::ThreeBlobs)
        .value("FOUR_BLOBS", DatasetKind::FourBlobs);
    m.def("parse_dataset_kind", &parse_dataset_kind, py::arg("name"));

    py::class_<Sample>(m, "Sample")
        .def(py::init([](double x, double y, int label) {
                 return Sample{x, y, label};
             }),
             py::arg("x"), py::arg("y"), py::arg("label"))
        .def_readonly("x", &Sample::x)
        .def_readonly("y", &Sample::y)
        .def_readonly("label", &Sample::label)
        .def("__repr__", [](const Sample &s) {
            std::ostringstream o;
            o << "Sample(" << s.x << ", " << s.y << ", " << s.label << ")";
            return o.str();
        });

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("kind", &Dataset::kind)
        .def_readonly("n_classes", &Dataset::n_classes)
        .def_readonly("seed", &Dataset::seed)
        .def_readonly("samples", &Dataset::samples)
        .def("__len__", [](const Dataset &d) { return d.samples.size(); });

    m.def("generate", &generate, py::arg("kind"), py::arg("n"),
          py::arg("seed"), py::arg("n_classes"), py::arg("label_noise") = 0.0);
    m.def("ground_truth_label", &ground_truth_label, py::arg("kind"),
          py::arg("n_classes"), py::arg("x"), py::arg("y"));
    m.def(
        "split",
        [](const Dataset &d, double fraction, std::uint64_t seed) {
            auto s = split(d, fraction, seed);
            return py::make_tuple(s.train, s.test);
        },
        py::arg("dataset"), py::arg("test_fraction"), py::arg("seed"),
        "Returns (train, test) sample lists.");

    // training
    m.def(
        "gradients",
        [](const Model &md, const ParameterSet &p,
           const std::vector<Sample> &batch) {
            return gradients(md, p, batch, loss_kind_for(md.config()));
        },
        py::arg("model"), py::arg("params"), py::arg("batch"));
    m.def(
        "batch_loss",
        [](const Model &md, const ParameterSet &p,
           const std::vector<Sample> &batch) {
            return batch_loss(md, p, batch, loss_kind_for(md.config()));
        },
        py::arg("model"), py::arg("params"), py::arg("batch"));

    py::class_<Trainer>(m, "Trainer")
        .def(py::init([](const ModelConfig &c, std::vector<Sample> train,
                         std::vector<Sample> test, double lr, int batch_size,
                         std::uint64_t seed) {
                 return Trainer(c, std::move(train), std::move(test),
                                TrainOptions{lr, batch_size, seed});
             }),
             py::arg("config"), py::arg("train"), py::arg("test"),
             py::arg("lr") = 0.05, py::arg("batch_size") = 16,
             py::arg("seed") = 0)
        .def("step_batch",
             [](Trainer &t) {
                 const auto r = t.step_batch();
                 py::dict d;
                 d["batch_loss"] = r.batch_loss;
                 d["epoch_metrics"] =
                     r.epoch_metrics
                         ? py::object(epoch_metrics_dict(*r.epoch_metrics))
                         : py::none();
                 return d;
             })
        .def("train_epoch",
             [](Trainer &t) { return epoch_metrics_dict(t.train_epoch()); })
        .def("evaluate",
             [](const Trainer &t) { return epoch_metrics_dict(t.evaluate()); })
        .def("reset", &Trainer::reset, py::arg("seed") = py::none())
        .def("set_lr", &Trainer::set_lr)
        .def("set_batch_size", &Trainer::set_batch_size)
        .def_property_readonly("model", &Trainer::model)
        .def_property_readonly("params", &Trainer::params)
        .def_property_readonly("epoch", &Trainer::epoch)
        .def_property_readonly("step", &Trainer::step)
        .def_property_readonly("history", [](const Trainer &t) {
            py::list out;
            for (const auto &e : t.history()) {
                out.append(epoch_metrics_dict(e));
            }
            return out;
        });

    // geometry
    m.def("bloch_coordinates", &bloch_coordinates, py::arg("state"));
    m.def("default_simplex_vertices", &default_simplex_vertices);
    m.def(
        "simplex_coordinates",
        [](const StateVector &s) {
            const auto p = simplex_coordinates(s);
            py::dict d;
            d["p"] = p.p;
            d["weights"] = p.weights;
            d["size"] = p.concurrence_size;
            d["hue"] = p.phase_hue;
            return d;
        },
        py::arg("state"));
    m.def(
        "decision_grid",
        [](const Model &md, const ParameterSet &p, int resolution) {
            const auto g = decision_grid(md, p, resolution);
            py::dict d;
            d["resolution"] = g.resolution;
            d["labels"] = g.labels;
            d["scores"] = g.scores;
            return d;
        },
        py::arg("model"), py::arg("params"),
        py::arg("resolution") = kDefaultGridResolution);

    // configuration, headless runs and the server; JSON crosses as text
    m.def(
        "parse_session_config",
        [](const std::string &text) {
            return to_json(parse_session_config(nlohmann::json::parse(text)))
                .dump();
        },
        py::arg("config_json"),
        "Validates a config and returns the fully explicit form as JSON text.");
    m.def(
        "run_headless",
        [](const std::string &config_json, int epochs,
           const std::filesystem::path &out_dir) {
            std::ostringstream err;
            int code;
            {
                py::gil_scoped_release release;
                code = run_headless(nlohmann::json::parse(config_json), epochs,
                                    out_dir, err);
            }
            return py::make_tuple(code, err.str());
        },
        py::arg("config_json"), py::arg("epochs"), py::arg("out_dir"),
        "Returns (exit_code, diagnostics).");

    py::class_<Server>(m, "Server")
        .def(py::init([](const std::string &bind, int port,
                         std::optional<std::filesystem::path> ui_dir) {
                 ServerOptions o;
                 o.bind = bind;
                 o.port = port;
                 o.ui_dir = std::move(ui_dir);
                 return std::make_unique<Server>(o);
             }),
             py::arg("bind") = "127.0.0.1", py::arg("port") = 0,
             py::arg("ui_dir") = py::none())
        .def("start", &Server::start,
             py::call_guard<py::gil_scoped_release>(),
             "Serve on a background thread; returns the bound port.")
        .def("stop", &Server::stop, py::call_guard<py::gil_scoped_release>());
}
