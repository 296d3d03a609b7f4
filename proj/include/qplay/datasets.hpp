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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qplay {

enum class DatasetKind { Circle, Annulus, XOR, Moons, Spiral, ThreeBlobs, FourBlobs };

[[nodiscard]] std::string_view to_string(DatasetKind kind);
/// Case-insensitive; throws ConfigError on unknown names.
[[nodiscard]] DatasetKind parse_dataset_kind(std::string_view name);
/// Class count used when the caller does not pick one.
[[nodiscard]] int default_classes(DatasetKind kind);
[[nodiscard]] bool supports_classes(DatasetKind kind, int n_classes);

struct Sample {
    double x = 0.0;
    double y = 0.0;
    int label = 0;

    friend bool operator==(const Sample &, const Sample &) = default;
};

struct Dataset {
    DatasetKind kind = DatasetKind::Circle;
    int n_classes = 2;
    std::uint64_t seed = 0;
    double label_noise = 0.0;
    std::vector<Sample> samples;
};

/// Closed-form labelling rule of a dataset kind. Every generated sample
/// carries the label of this rule at its coordinates (before label noise).
[[nodiscard]] int ground_truth_label(DatasetKind kind, int n_classes, double x,
                                     double y);

/// Generates n samples in [-1, 1]^2 with exactly balanced classes (up to
/// one sample when n is not divisible by n_classes). `label_noise` is the
/// probability of replacing a label with a different, uniformly drawn class.
[[nodiscard]] Dataset generate(DatasetKind kind, int n, std::uint64_t seed,
                               int n_classes, double label_noise = 0.0);

/// Coordinate of lattice cell i in a resolution-wide grid over
/// [-1.2, 1.2]. Cells are indexed row-major with y increasing by row.
[[nodiscard]] double grid_coordinate(int i, int resolution);
inline constexpr double kGridExtent = 1.2;

/// Rule labels at the cell centres of a resolution x resolution lattice.
[[nodiscard]] std::vector<int> ground_truth_grid(DatasetKind kind,
                                                 int n_classes, int resolution);

struct Split {
    std::vector<Sample> train;
    std::vector<Sample> test;
};

/// Stratified seeded split; each class contributes round(count * fraction)
/// samples to the test slice, and both slices are nonempty.
[[nodiscard]] Split split(const Dataset &dataset, double test_fraction,
                          std::uint64_t seed);

/// `x,y,label` table with 17 significant digits.
void write_csv(std::ostream &out, std::span<const Sample> samples);
[[nodiscard]] std::vector<Sample> read_csv(std::istream &in);

} // namespace qplay
