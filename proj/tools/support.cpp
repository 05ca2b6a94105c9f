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

#include "support.hpp"

#include <cmath>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

namespace cli {

void flush_warnings() {
    size_t n = cvr_warning_count();
    for (size_t k = 0; k < n; k++) {
        std::cerr << "warning: " << cvr_warning(k) << "\n";
    }
}

void check(cvr_status status, const char *what) {
    flush_warnings();
    if (status == CVR_OK) {
        return;
    }
    int code = (status == CVR_ERR_ARGUMENT || status == CVR_ERR_DOMAIN) ? kExitUsage : kExitCheckFailed;
    throw Failure(code, std::string(what) + ": " + cvr_status_name(status) + ": " + cvr_last_error());
}

std::string num(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

double transmissivity(double distance_km, double alpha) {
    double t = 0;
    check(cvr_transmissivity(distance_km, alpha, &t), "transmissivity");
    return t;
}

CsvWriter::CsvWriter(const std::filesystem::path &path, const std::vector<std::string> &header)
    : path_(path), out_(path) {
    if (!out_) {
        throw Failure(kExitCheckFailed, "cannot open " + path.string() + " for writing");
    }
    for (size_t k = 0; k < header.size(); k++) {
        out_ << (k ? "," : "") << header[k];
    }
    out_ << "\n";
}

void CsvWriter::row(const std::vector<double> &values) {
    for (size_t k = 0; k < values.size(); k++) {
        out_ << (k ? "," : "") << num(values[k]);
    }
    out_ << "\n";
    if (!out_) {
        throw Failure(kExitCheckFailed, "write to " + path_.string() + " failed");
    }
}

std::vector<std::string> expand_config(int argc, char **argv, const std::vector<std::string> &subcommands) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> files;
    std::vector<std::string> rest;
    for (size_t k = 0; k < args.size(); k++) {
        const std::string &a = args[k];
        if (a == "--config") {
            if (k + 1 >= args.size()) {
                throw CLI::ArgumentMismatch("--config needs a file name");
            }
            files.push_back(args[++k]);
        } else if (a.rfind("--config=", 0) == 0) {
            files.push_back(a.substr(9));
        } else {
            rest.push_back(a);
        }
    }
    if (files.empty()) {
        return rest;
    }

    std::vector<std::string> injected;
    for (const auto &file : files) {
        if (!std::filesystem::exists(file)) {
            throw CLI::FileError::Missing(file);
        }
        for (const auto &item : CLI::ConfigINI().from_file(file)) {
            if (!item.parents.empty() || item.name == "--") {
                std::string section = item.parents.empty() ? item.name : item.parents.front();
                throw CLI::ConfigError("config file " + file + ": sections are not supported ([" + section + "])");
            }
            std::string joined;
            for (size_t k = 0; k < item.inputs.size(); k++) {
                joined += (k ? "," : "") + item.inputs[k];
            }
            injected.push_back("--" + item.name + "=" + joined);
        }
    }

    size_t at = 0;
    while (at < rest.size() &&
           std::find(subcommands.begin(), subcommands.end(), rest[at]) == subcommands.end()) {
        at++;
    }
    if (at == rest.size()) {
        throw CLI::RequiredError("a subcommand");
    }
    rest.insert(rest.begin() + (long)at + 1, injected.begin(), injected.end());
    return rest;
}

}  // namespace cli
