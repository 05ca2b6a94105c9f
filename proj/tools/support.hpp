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

#ifndef CVREPEATER_TOOLS_SUPPORT_HPP
#define CVREPEATER_TOOLS_SUPPORT_HPP

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvrepeater/cvrepeater.h"

namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// A failed library call, carrying the exit code it maps to.
class Failure : public std::runtime_error {
   public:
    Failure(int exit_code, const std::string &msg) : std::runtime_error(msg), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

   private:
    int exit_code_;
};

/// Throws Failure on a non-OK status and forwards pending warnings to stderr.
void check(cvr_status status, const char *what);

void flush_warnings();

/// Fixed-format number text shared by every output file.
std::string num(double v);

double transmissivity(double distance_km, double alpha);

class CsvWriter {
   public:
    CsvWriter(const std::filesystem::path &path, const std::vector<std::string> &header);
    void row(const std::vector<double> &values);

   private:
    std::filesystem::path path_;
    std::ofstream out_;
};

/// Expands `--config FILE` into flags placed right after the subcommand name, ahead of
/// the user's own flags. Returns the rewritten argument list (argv[0] excluded).
std::vector<std::string> expand_config(int argc, char **argv, const std::vector<std::string> &subcommands);

}  // namespace cli

#endif
