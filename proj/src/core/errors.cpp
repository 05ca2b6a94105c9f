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

#include "core/errors.hpp"

#include <utility>

namespace {
thread_local std::vector<std::string> pending_warnings;
}

void cvr::warn(std::string msg) {
    pending_warnings.push_back(std::move(msg));
}

std::vector<std::string> cvr::take_warnings() {
    std::vector<std::string> out;
    out.swap(pending_warnings);
    return out;
}
