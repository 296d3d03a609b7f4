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

#include "qplay/datasets.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "qplay/errors.hpp"
#include "qplay/rng.hpp"

namespace qplay {

namespace {

using std::numbers::pi;

constexpr double kCircleRadiusSq = 0.5;
constexpr double kRingInner = 0.4;
constexpr double kRingOuter = 0.8;

// Moons are the two interleaved unit half circles, (cos t, sin t) and
// (1 - cos t, 0.5 - sin t), mapped into the unit square.
constexpr double kMoonScale = 0.6;
constexpr double kMoonShiftX = 0.5;
constexpr double kMoonShiftY = 0.25;
constexpr double kMoonNoise = 0.1;

// Spiral arm c: angle t + c*pi, radius kSpiralGrowth * t.
constexpr double kSpiralTurns = 2.5 * pi;
constexpr double kSpiralReach = 0.9;
constexpr double kSpiralGrowth = kSpiralReach / kSpiralTurns;
constexpr double kSpiralStart = 0.5;
constexpr double kSpiralNoise = 0.04;

constexpr double kBlobSigma = 0.2;

constexpr std::array<std::array<double, 2>, 4> kFourCenters{
    {{-0.5, 0.5}, {0.5, 0.5}, {-0.5, -0.5}, {0.5, -0.5}}};

std::array<double, 2> three_center(int c) {
    const double a = pi / 2 + 2 * pi * c / 3;
    return {0.55 * std::cos(a), 0.55 * std::sin(a)};
}

int nearest_center(double x, double y, int n) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < n; ++c) {
        const auto ctr = n == 3 ? three_center(c)
                                : kFourCenters[static_cast<std::size_t>(c)];
        const double d = std::hypot(x - ctr[0], y - ctr[1]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

// Distance from (px, py) to the upper (sign = +1) or lower (sign = -1) unit
// half circle centred at (cx, cy).
double half_circle_distance(double px, double py, double cx, double cy,
                            double sign) {
    const double dx = px - cx;
    const double dy = (py - cy) * sign;
    if (dy >= 0) {
        return std::abs(std::hypot(dx, dy) - 1.0);
    }
    return std::min(std::hypot(dx - 1.0, dy), std::hypot(dx + 1.0, dy));
}

int moons_label(double x, double y) {
    // Back to the unscaled moon frame.
    const double u = x / kMoonScale + kMoonShiftX;
    const double v = y / kMoonScale + kMoonShiftY;
    const double d0 = half_circle_distance(u, v, 0.0, 0.0, 1.0);
    const double d1 = half_circle_distance(u, v, 1.0, 0.5, -1.0);
    return d1 < d0 ? 1 : 0;
}

double spiral_arm_distance(double r, double phi, int arm) {
    double t0 = std::fmod(phi - arm * pi, 2 * pi);
    if (t0 < 0) {
        t0 += 2 * pi;
    }
    double best = std::numeric_limits<double>::infinity();
    for (double t = t0; t < kSpiralTurns + 4 * pi; t += 2 * pi) {
        best = std::min(best, std::abs(r - kSpiralGrowth * t));
    }
    return best;
}

int spiral_label(double x, double y) {
    const double r = std::hypot(x, y);
    const double phi = std::atan2(y, x);
    return spiral_arm_distance(r, phi, 1) < spiral_arm_distance(r, phi, 0) ? 1
                                                                            : 0;
}

bool in_square(double x, double y) {
    return std::abs(x) <= 1.0 && std::abs(y) <= 1.0;
}

// Draws a candidate point for class c from the kind's generative process.
std::array<double, 2> propose(DatasetKind kind, int c, Rng &rng) {
    switch (kind) {
    case DatasetKind::Moons: {
        const double t = rng.uniform(0.0, pi);
        double u = c == 0 ? std::cos(t) : 1.0 - std::cos(t);
        double v = c == 0 ? std::sin(t) : 0.5 - std::sin(t);
        u += rng.normal(0.0, kMoonNoise);
        v += rng.normal(0.0, kMoonNoise);
        return {(u - kMoonShiftX) * kMoonScale, (v - kMoonShiftY) * kMoonScale};
    }
    case DatasetKind::Spiral: {
        const double t = rng.uniform(kSpiralStart, kSpiralTurns);
        const double r = kSpiralGrowth * t + rng.normal(0.0, kSpiralNoise);
        const double a = t + c * pi;
        return {r * std::cos(a), r * std::sin(a)};
    }
    case DatasetKind::ThreeBlobs:
    case DatasetKind::FourBlobs: {
        const auto ctr = kind == DatasetKind::ThreeBlobs
                             ? three_center(c)
                             : kFourCenters[static_cast<std::size_t>(c)];
        return {rng.normal(ctr[0], kBlobSigma), rng.normal(ctr[1], kBlobSigma)};
    }
    default:
        return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    }
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    return out;
}

} // namespace

std::string_view to_string(DatasetKind kind) {
    switch (kind) {
    case DatasetKind::Circle:
        return "circle";
    case DatasetKind::Annulus:
        return "annulus";
    case DatasetKind::XOR:
        return "xor";
    case DatasetKind::Moons:
        return "moons";
    case DatasetKind::Spiral:
        return "spiral";
    case DatasetKind::ThreeBlobs:
        return "three_blobs";
    case DatasetKind::FourBlobs:
        return "four_blobs";
    }
    return "circle";
}

DatasetKind parse_dataset_kind(std::string_view name) {
    auto n = lower(name);
    std::replace(n.begin(), n.end(), '-', '_');
    for (auto kind : {DatasetKind::Circle, DatasetKind::Annulus,
                      DatasetKind::XOR, DatasetKind::Moons, DatasetKind::Spiral,
                      DatasetKind::ThreeBlobs, DatasetKind::FourBlobs}) {
        if (n == to_string(kind)) {
            return kind;
        }
    }
    if (n == "threeblobs") {
        return DatasetKind::ThreeBlobs;
    }
    if (n == "fourblobs") {
        return DatasetKind::FourBlobs;
    }
    throw ConfigError("unknown dataset kind '" + std::string(name) + "'");
}

int default_classes(DatasetKind kind) {
    switch (kind) {
    case DatasetKind::ThreeBlobs:
        return 3;
    case DatasetKind::FourBlobs:
        return 4;
    default:
        return 2;
    }
}

bool supports_classes(DatasetKind kind, int n_classes) {
    if (kind == DatasetKind::Annulus) {
        return n_classes == 2 || n_classes == 3;
    }
    return n_classes == default_classes(kind);
}

int ground_truth_label(DatasetKind kind, int n_classes, double x, double y) {
    switch (kind) {
    case DatasetKind::Circle:
        return x * x + y * y < kCircleRadiusSq ? 1 : 0;
    case DatasetKind::Annulus: {
        const double r = std::hypot(x, y);
        if (n_classes == 3) {
            return r < kRingInner ? 0 : (r < kRingOuter ? 1 : 2);
        }
        return r >= kRingInner && r < kRingOuter ? 1 : 0;
    }
    case DatasetKind::XOR:
        return x * y > 0 ? 1 : 0;
    case DatasetKind::Moons:
        return moons_label(x, y);
    case DatasetKind::Spiral:
        return spiral_label(x, y);
    case DatasetKind::ThreeBlobs:
        return nearest_center(x, y, 3);
    case DatasetKind::FourBlobs:
        return nearest_center(x, y, 4);
    }
    return 0;
}

Dataset generate(DatasetKind kind, int n, std::uint64_t seed, int n_classes,
                 double label_noise) {
    if (n < 8) {
        throw ConfigError("dataset size must be at least 8");
    }
    if (!supports_classes(kind, n_classes)) {
        throw ConfigError("dataset '" + std::string(to_string(kind)) +
                          "' does not support " + std::to_string(n_classes) +
                          " classes");
    }
    if (!(label_noise >= 0.0 && label_noise <= 0.5)) {
        throw ConfigError("label noise must be in [0, 0.5]");
    }
    Dataset ds{kind, n_classes, seed, label_noise, {}};
    ds.samples.reserve(static_cast<std::size_t>(n));
    Rng rng(derive_seed(seed, 0));
    for (int i = 0; i < n; ++i) {
        const int c = i % n_classes;
        for (;;) {
            const auto [x, y] = propose(kind, c, rng);
            if (in_square(x, y) && ground_truth_label(kind, n_classes, x, y) == c) {
                ds.samples.push_back({x, y, c});
                break;
            }
        }
    }
    if (label_noise > 0.0) {
        Rng noise(derive_seed(seed, 1));
        for (auto &s : ds.samples) {
            if (noise.uniform() < label_noise) {
                const auto shift = 1 + noise.below(
                                           static_cast<std::uint64_t>(n_classes - 1));
                s.label = static_cast<int>(
                    (static_cast<std::uint64_t>(s.label) + shift) %
                    static_cast<std::uint64_t>(n_classes));
            }
        }
    }
    return ds;
}

double grid_coordinate(int i, int resolution) {
    const double cell = 2.0 * kGridExtent / resolution;
    return -kGridExtent + (i + 0.5) * cell;
}

std::vector<int> ground_truth_grid(DatasetKind kind, int n_classes,
                                   int resolution) {
    if (resolution < 2) {
        throw ConfigError("grid resolution must be at least 2");
    }
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(resolution * resolution));
    for (int row = 0; row < resolution; ++row) {
        const double y = grid_coordinate(row, resolution);
        for (int col = 0; col < resolution; ++col) {
            labels.push_back(ground_truth_label(
                kind, n_classes, grid_coordinate(col, resolution), y));
        }
    }
    return labels;
}

Split split(const Dataset &dataset, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ConfigError("test fraction must be in (0, 1)");
    }
    const auto &samples = dataset.samples;
    if (samples.size() < 2) {
        throw ConfigError("cannot split fewer than two samples");
    }
    std::vector<std::vector<std::size_t>> by_class(
        static_cast<std::size_t>(dataset.n_classes));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        by_class.at(static_cast<std::size_t>(samples[i].label)).push_back(i);
    }
    Rng rng(derive_seed(seed, 2));
    std::vector<bool> in_test(samples.size(), false);
    for (auto &members : by_class) {
        shuffle(members.begin(), members.end(), rng);
        auto take = static_cast<std::size_t>(
            std::llround(static_cast<double>(members.size()) * test_fraction));
        if (members.size() >= 2) {
            take = std::clamp<std::size_t>(take, 1, members.size() - 1);
        }
        for (std::size_t j = 0; j < take && j < members.size(); ++j) {
            in_test[members[j]] = true;
        }
    }
    Split out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        (in_test[i] ? out.test : out.train).push_back(samples[i]);
    }
    if (out.test.empty()) {
        out.test.push_back(out.train.back());
        out.train.pop_back();
    } else if (out.train.empty()) {
        out.train.push_back(out.test.back());
        out.test.pop_back();
    }
    return out;
}

void write_csv(std::ostream &out, std::span<const Sample> samples) {
    out << "x,y,label\n";
    std::array<char, 64> buf{};
    auto put = [&](double v) {
        auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
        out.write(buf.data(), res.ptr - buf.data());
    };
    for (const auto &s : samples) {
        put(s.x);
        out << ',';
        put(s.y);
        out << ',' << s.label << '\n';
    }
}

std::vector<Sample> read_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DomainError("dataset table is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "x,y,label") {
        throw DomainError("dataset table must start with header 'x,y,label'");
    }
    std::vector<Sample> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        Sample s;
        const char *p = line.data();
        const char *end = line.data() + line.size();
        auto fail = [&]() {
            return DomainError("malformed dataset row " +
                               std::to_string(line_no) + ": '" + line + "'");
        };
        auto r1 = std::from_chars(p, end, s.x);
        if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ',') {
            throw fail();
        }
        auto r2 = std::from_chars(r1.ptr + 1, end, s.y);
        if (r2.ec != std::errc{} || r2.ptr == end || *r2.ptr != ',') {
            throw fail();
        }
        auto r3 = std::from_chars(r2.ptr + 1, end, s.label);
        if (r3.ec != std::errc{} || r3.ptr != end || s.label < 0) {
            throw fail();
        }
        samples.push_back(s);
    }
    return samples;
}

} // namespace qplay
