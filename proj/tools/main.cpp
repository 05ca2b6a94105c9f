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

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "cvrepeater/cvrepeater.h"
#include "support.hpp"

int main(int argc, char **argv) {
    CLI::App app{"Continuous-variable quantum repeater rate calculator."};
    app.name("cvrepeater");
    app.require_subcommand(1);
    app.set_version_flag("--version", cvr_version());
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (0: CVR_NUM_THREADS or hardware)")
        ->check(CLI::NonNegativeNumber);

    std::map<std::string, cli::Runner> runners;
    runners["link"] = cli::add_link(app);
    runners["optimize-link"] = cli::add_optimize_link(app);
    runners["swap"] = cli::add_swap(app);
    runners["chain"] = cli::add_chain(app);
    runners["envelope"] = cli::add_envelope(app);
    runners["crossover"] = cli::add_crossover(app);
    runners["verify"] = cli::add_verify(app);

    std::vector<std::string> names;
    for (const auto &[name, _] : runners) {
        names.push_back(name);
    }
    try {
        std::vector<std::string> args = cli::expand_config(argc, argv, names);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return cli::kExitUsage;
    }

    cvr_set_num_threads(threads);
    try {
        for (const auto &[name, run] : runners) {
            if (app.got_subcommand(name)) {
                return run();
            }
        }
    } catch (const cli::Failure &e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::kExitCheckFailed;
    }
    return cli::kExitUsage;
}
