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

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qplay {

/// Invalid architecture, dataset or session configuration.
class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Mathematically invalid input (dimension mismatch, non-finite value, ...).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Qubit index out of range.
class IndexError : public std::out_of_range {
  public:
    using std::out_of_range::out_of_range;
};

/// Lookup of an unknown session.
class NotFoundError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct FieldError {
    std::string field;
    std::string message;
};

/// Structured configuration error listing every offending field.
class ValidationError : public ConfigError {
  public:
    explicit ValidationError(std::vector<FieldError> errors)
        : ConfigError(summarize(errors)), errors_(std::move(errors)) {}

    [[nodiscard]] const std::vector<FieldError> &errors() const noexcept {
        return errors_;
    }

  private:
    static std::string summarize(const std::vector<FieldError> &errors) {
        std::string out = "invalid configuration:";
        for (const auto &e : errors) {
            out += " ";
            out += e.field;
            out += " (";
            out += e.message;
            out += ");";
        }
        return out;
    }

    std::vector<FieldError> errors_;
};

} // namespace qplay
