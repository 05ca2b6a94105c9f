// Copyright 2026 The cvrepeater Authors
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

#ifndef CVREPEATER_TOOLS_COMMANDS_HPP
#define CVREPEATER_TOOLS_COMMANDS_HPP

#include <functional>

#include "CLI11.hpp"

namespace cli {

/// Runs a parsed subcommand; returns the process exit code.
using Runner = std::function<int()>;

Runner add_link(CLI::App &app);
Runner add_optimize_link(CLI::App &app);
Runner add_swap(CLI::App &app);
Runner add_chain(CLI::App &app);
Runner add_envelope(CLI::App &app);
Runner add_crossover(CLI::App &app);
Runner add_verify(CLI::App &app);

}  // namespace cli

#endif
