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

#ifndef CVREPEATER_CORE_VERIFY_HPP
#define CVREPEATER_CORE_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace cvr::verify {

struct VerifyConfig {
    int cutoff = 30;
    int points = 20;
    uint64_t seed = 20260415;
    /// Relative error injected into kappa on the closed-form side (negative control).
    double inject_kappa_error = 0;
};

struct Check {
    std::string name;
    double residual;
    double tolerance;
    bool passed;
    std::string note;
};

struct VerifyReport {
    std::vector<Check> checks;
    std::vector<std::string> warnings;

    bool all_passed() const;
    /// Index of the check with the largest residual/tolerance ratio.
    size_t worst() const;
};

VerifyReport run(const VerifyConfig &config);

}  // namespace cvr::verify

#endif
