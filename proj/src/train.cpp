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

#include "qplay/train.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "qplay/errors.hpp"
#include "qplay/rng.hpp"

namespace qplay {

namespace {

// Stream offset for the per-epoch shuffle seeds.
constexpr std::uint64_t kShuffleStream = 1000;

// d/da, d/db, d/dc of R(a, b, c) = RZ(c) RY(b) RZ(a).
std::array<Mat2, 3> rotation_derivatives(double a, double b, double c) {
    const Complex half_i{0.0, -0.5};
    const Mat2 gz = gates::pauli_z() * half_i;
    const Mat2 gy = gates::pauli_y() * half_i;
    const Mat2 za = gates::rz(a);
    const Mat2 yb = gates::ry(b);
    const Mat2 zc = gates::rz(c);
    return {zc * yb * za * gz, zc * yb * gy * za, gz * zc * yb * za};
}

// Gate matrix and the derivative matrices for each parameter slot.
struct GateWithDerivatives {
    Mat2 gate;
    std::array<Mat2, 6> d{};
    int n = 0;
};

GateWithDerivatives gate_derivatives(std::span<const double> p,
                                     const FeatureVector &x, Variant variant) {
    GateWithDerivatives g;
    if (variant == Variant::Separate) {
        const Mat2 enc = rotation_gate(x[0], x[1], x[2]);
        const Mat2 rot = rotation_gate(p[0], p[1], p[2]);
        g.gate = rot * enc;
        const auto dr = rotation_derivatives(p[0], p[1], p[2]);
        for (int j = 0; j < 3; ++j) {
            g.d[static_cast<std::size_t>(j)] = dr[static_cast<std::size_t>(j)] * enc;
        }
        g.n = 3;
        return g;
    }
    const std::array<double, 3> a{p[0] * x[0] + p[3], p[1] * x[1] + p[4],
                                  p[2] * x[2] + p[5]};
    g.gate = rotation_gate(a[0], a[1], a[2]);
    const auto dr = rotation_derivatives(a[0], a[1], a[2]);
    for (std::size_t j = 0; j < 3; ++j) {
        g.d[j] = dr[j] * Complex{x[j], 0.0};
        g.d[j + 3] = dr[j];
    }
    g.n = 6;
    return g;
}

void check_batch(std::size_t n, std::size_t labels) {
    if (n == 0) {
        throw DomainError("loss of an empty batch");
    }
    if (n != labels) {
        throw DomainError("batch and label counts differ");
    }
}

void apply_entangler(std::span<Complex> amps, Entangler e) {
    if (e == Entangler::CZ) {
        kernels::apply_cz(amps, 2, 0, 1);
    } else if (e == Entangler::CNOT) {
        kernels::apply_cx(amps, 2, 0, 1);
    }
}

// Adds this sample's loss gradient to `grad` and returns its loss.
double accumulate_sample(const Model &model, const ParameterSet &params,
                         const Sample &sample, LossKind kind, double weight,
                         std::span<double> grad) {
    const auto &cfg = model.config();
    const int nq = cfg.n_qubits;
    const FeatureVector x = features(sample);
    const std::size_t dim = std::size_t{1} << nq;

    // Forward sweep, remembering the input to every single-qubit gate.
    std::vector<GateWithDerivatives> gates;
    std::vector<std::vector<Complex>> inputs;
    gates.reserve(static_cast<std::size_t>(cfg.n_layers * nq));
    inputs.reserve(gates.capacity());
    std::vector<Complex> psi(dim, Complex{});
    psi[0] = 1.0;
    for (int k = 0; k < cfg.n_layers; ++k) {
        for (int q = 0; q < nq; ++q) {
            gates.push_back(gate_derivatives(params.gate(k, q), x, cfg.variant));
            inputs.push_back(psi);
            kernels::apply_1q(psi, nq, q, gates.back().gate);
        }
        if (nq == 2 && k + 1 < cfg.n_layers) {
            apply_entangler(psi, cfg.entangler);
        }
    }

    // Seed: lambda_k = dL/dRe(psi_k) + i dL/dIm(psi_k).
    std::vector<Complex> lambda(dim, Complex{});
    double loss = 0.0;
    if (kind == LossKind::FidelityChi2) {
        const auto &t = model.targets()[static_cast<std::size_t>(sample.label)];
        const Complex z = kernels::inner(t.amplitudes(), psi);
        loss = 1.0 - std::norm(z);
        for (std::size_t k = 0; k < dim; ++k) {
            lambda[k] = -2.0 * z * t[k] * weight;
        }
    } else {
        const auto nc = static_cast<std::size_t>(cfg.n_classes);
        const auto y = static_cast<std::size_t>(sample.label);
        double total = 0.0;
        for (std::size_t c = 0; c < nc; ++c) {
            total += std::norm(psi[c]);
        }
        if (total < 1e-12) {
            loss = -std::log(1.0 / static_cast<double>(nc) + kCrossEntropyClip);
        } else {
            const double sy = std::norm(psi[y]) / total;
            loss = -std::log(sy + kCrossEntropyClip);
            const double outer = -weight / (sy + kCrossEntropyClip);
            for (std::size_t c = 0; c < nc; ++c) {
                const double dsy_dpc = ((c == y ? 1.0 : 0.0) - sy) / total;
                lambda[c] = 2.0 * outer * dsy_dpc * psi[c];
            }
        }
    }

    // Backward sweep.
    std::vector<Complex> tmp(dim);
    for (int k = cfg.n_layers - 1; k >= 0; --k) {
        if (nq == 2 && k + 1 < cfg.n_layers) {
            // CZ and CNOT are self-inverse.
            apply_entangler(lambda, cfg.entangler);
        }
        for (int q = nq - 1; q >= 0; --q) {
            const auto op = static_cast<std::size_t>(k * nq + q);
            const auto &g = gates[op];
            const std::size_t base = params.offset(k, q);
            for (int j = 0; j < g.n; ++j) {
                tmp = inputs[op];
                kernels::apply_1q(tmp, nq, q, g.d[static_cast<std::size_t>(j)]);
                grad[base + static_cast<std::size_t>(j)] +=
                    kernels::inner(lambda, tmp).real();
            }
            kernels::apply_1q(lambda, nq, q, g.gate.adjoint());
        }
    }
    return loss;
}

} // namespace

std::string_view to_string(LossKind kind) {
    return kind == LossKind::FidelityChi2 ? "fidelity_chi2" : "cross_entropy";
}

LossKind loss_kind_for(const ModelConfig &config) {
    return config.n_qubits == 1 ? LossKind::FidelityChi2
                                : LossKind::CrossEntropy;
}

double fidelity_loss(std::span<const ForwardTrace> traces,
                     std::span<const int> labels,
                     const TargetStateSet &targets) {
    check_batch(traces.size(), labels.size());
    double loss = 0.0;
    for (std::size_t m = 0; m < traces.size(); ++m) {
        const auto label = static_cast<std::size_t>(labels[m]);
        if (label >= targets.size()) {
            throw DomainError("label out of range");
        }
        loss += 1.0 - fidelity(targets[label], traces[m].final_state);
    }
    return loss;
}

double cross_entropy_loss(std::span<const std::vector<double>> score_sets,
                          std::span<const int> labels) {
    check_batch(score_sets.size(), labels.size());
    double loss = 0.0;
    for (std::size_t m = 0; m < score_sets.size(); ++m) {
        const auto label = static_cast<std::size_t>(labels[m]);
        if (label >= score_sets[m].size()) {
            throw DomainError("label out of range");
        }
        loss -= std::log(score_sets[m][label] + kCrossEntropyClip);
    }
    return loss / static_cast<double>(score_sets.size());
}

double batch_loss(const Model &model, const ParameterSet &params,
                  std::span<const Sample> batch, LossKind kind) {
    std::vector<ForwardTrace> traces;
    std::vector<int> labels;
    traces.reserve(batch.size());
    for (const auto &s : batch) {
        traces.push_back(forward(model, params, features(s)));
        labels.push_back(s.label);
    }
    if (kind == LossKind::FidelityChi2) {
        return fidelity_loss(traces, labels, model.targets());
    }
    std::vector<std::vector<double>> scores;
    scores.reserve(traces.size());
    for (auto &t : traces) {
        scores.push_back(std::move(t.class_scores));
    }
    return cross_entropy_loss(scores, labels);
}

LossAndGradient loss_and_gradient(const Model &model, const ParameterSet &params,
                                  std::span<const Sample> batch,
                                  LossKind kind) {
    check_shape(model, params);
    if (batch.empty()) {
        throw DomainError("gradient of an empty batch");
    }
    if (kind == LossKind::FidelityChi2 && !model.uses_target_readout()) {
        throw DomainError("fidelity loss needs target-state readout");
    }
    if (kind == LossKind::CrossEntropy && model.uses_target_readout()) {
        throw DomainError("cross-entropy needs basis-state readout");
    }
    for (const auto &s : batch) {
        if (s.label < 0 || s.label >= model.config().n_classes) {
            throw DomainError("label out of range");
        }
    }
    // chi2_F is a sum over samples, cross-entropy a mean.
    const double weight = kind == LossKind::FidelityChi2
                              ? 1.0
                              : 1.0 / static_cast<double>(batch.size());
    LossAndGradient out;
    out.gradient.assign(params.size(), 0.0);
    for (const auto &s : batch) {
        out.loss += accumulate_sample(model, params, s, kind, weight,
                                      out.gradient);
    }
    out.loss *= weight;
    return out;
}

std::vector<double> gradients(const Model &model, const ParameterSet &params,
                              std::span<const Sample> batch, LossKind kind) {
    return loss_and_gradient(model, params, batch, kind).gradient;
}

AdamState AdamState::fresh(std::size_t n, AdamHyper hyper) {
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0, hyper};
}

AdamUpdate adam_step(const AdamState &state, std::span<const double> params,
                     std::span<const double> grads) {
    if (params.size() != grads.size() || state.m.size() != params.size() ||
        state.v.size() != params.size()) {
        throw DomainError("adam_step: length mismatch");
    }
    AdamUpdate out{{params.begin(), params.end()}, state};
    auto &s = out.state;
    const auto &h = s.hyper;
    s.t += 1;
    const double c1 = 1.0 - std::pow(h.beta1, static_cast<double>(s.t));
    const double c2 = 1.0 - std::pow(h.beta2, static_cast<double>(s.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        s.m[i] = h.beta1 * s.m[i] + (1.0 - h.beta1) * grads[i];
        s.v[i] = h.beta2 * s.v[i] + (1.0 - h.beta2) * grads[i] * grads[i];
        const double m_hat = s.m[i] / c1;
        const double v_hat = s.v[i] / c2;
        out.params[i] -= h.lr * m_hat / (std::sqrt(v_hat) + h.eps);
    }
    return out;
}

double accuracy(const Model &model, const ParameterSet &params,
                std::span<const Sample> samples) {
    if (samples.empty()) {
        throw DomainError("accuracy of an empty slice");
    }
    std::size_t correct = 0;
    for (const auto &s : samples) {
        if (predict(model, params, features(s)).label == s.label) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

Trainer::Trainer(const ModelConfig &config, std::vector<Sample> train,
                 std::vector<Sample> test, TrainOptions options)
    : model_(config), options_(options), loss_kind_(loss_kind_for(config)),
      train_(std::move(train)), test_(std::move(test)) {
    if (train_.empty() || test_.empty()) {
        throw ConfigError("training and test slices must be nonempty");
    }
    for (const auto *slice : {&train_, &test_}) {
        for (const auto &s : *slice) {
            if (s.label < 0 || s.label >= config.n_classes) {
                throw ConfigError("sample label out of range for n_classes");
            }
        }
    }
    set_lr(options.lr);
    set_batch_size(options.batch_size);
    reset();
}

void Trainer::reset(std::optional<std::uint64_t> seed) {
    if (seed) {
        options_.seed = *seed;
    }
    auto built = build_model(model_.config(), options_.seed);
    params_ = std::move(built.second);
    adam_ = AdamState::fresh(params_.size(), AdamHyper{.lr = options_.lr});
    order_.clear();
    cursor_ = 0;
    epoch_ = 0;
    step_ = 0;
    history_.clear();
}

void Trainer::set_lr(double lr) {
    if (!std::isfinite(lr) || lr < 0.0) {
        throw ConfigError("learning rate must be finite and nonnegative");
    }
    options_.lr = lr;
    adam_.hyper.lr = lr;
}

void Trainer::set_batch_size(int batch_size) {
    if (batch_size < 1) {
        throw ConfigError("batch size must be positive");
    }
    options_.batch_size = batch_size;
}

void Trainer::set_params(ParameterSet params) {
    check_shape(model_, params);
    params_ = std::move(params);
    adam_ = AdamState::fresh(params_.size(), adam_.hyper);
}

BatchResult Trainer::step_batch() {
    if (order_.empty()) {
        order_.resize(train_.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        Rng rng(derive_seed(options_.seed,
                            kShuffleStream + static_cast<std::uint64_t>(epoch_)));
        shuffle(order_.begin(), order_.end(), rng);
        cursor_ = 0;
    }
    const std::size_t end =
        std::min(order_.size(),
                 cursor_ + static_cast<std::size_t>(options_.batch_size));
    std::vector<Sample> batch;
    batch.reserve(end - cursor_);
    for (std::size_t i = cursor_; i < end; ++i) {
        batch.push_back(train_[order_[i]]);
    }
    cursor_ = end;

    auto lg = loss_and_gradient(model_, params_, batch, loss_kind_);
    auto update = adam_step(adam_, params_.values(), lg.gradient);
    params_ = ParameterSet(model_.config(), std::move(update.params));
    adam_ = std::move(update.state);
    ++step_;

    BatchResult result{lg.loss, std::nullopt};
    if (cursor_ >= order_.size()) {
        order_.clear();
        cursor_ = 0;
        ++epoch_;
        result.epoch_metrics = evaluate();
        history_.push_back(*result.epoch_metrics);
    }
    return result;
}

EpochMetrics Trainer::train_epoch() {
    for (;;) {
        auto r = step_batch();
        if (r.epoch_metrics) {
            return *r.epoch_metrics;
        }
    }
}

EpochMetrics Trainer::evaluate() const {
    EpochMetrics m;
    m.epoch = epoch_;
    m.train_loss_sum = batch_loss(model_, params_, train_, loss_kind_);
    if (loss_kind_ == LossKind::CrossEntropy) {
        // batch_loss returns the mean for cross-entropy.
        m.train_loss = m.train_loss_sum;
        m.train_loss_sum *= static_cast<double>(train_.size());
    } else {
        m.train_loss = m.train_loss_sum / static_cast<double>(train_.size());
    }
    m.train_accuracy = accuracy(model_, params_, train_);
    m.test_accuracy = accuracy(model_, params_, test_);
    return m;
}

} // namespace qplay
