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

/**
 * @file cli.hpp
 * The qplay command line:
 *
 *   qplay run [--config FILE] [model/optimizer flags] [--epochs N] [--out DIR]
 *   qplay serve [--bind ADDR] [--port N] [--ui DIR]
 *   qplay dataset --kind KIND [--n N] [--seed S] [--classes C] [--noise P]
 *                 [--out FILE]
 *
 * For `run`, command-line flags override values from the config file, which
 * override the built-in defaults.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qplay::cli {

/// Runs the command line (args excludes the program name) and returns the
/// process exit code. `serve` blocks until SIGINT or SIGTERM.
int main(const std::vector<std::string> &args, std::ostream &out,
         std::ostream &err);

} // namespace qplay::cli
