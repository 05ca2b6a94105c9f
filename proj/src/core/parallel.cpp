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

#include "core/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "core/errors.hpp"

namespace {
std::atomic<int> thread_override{0};
}

int cvr::num_threads() {
    int n = thread_override.load();
    if (n > 0) {
        return n;
    }
    if (const char *env = std::getenv("CVR_NUM_THREADS")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) {
            return (int)v;
        }
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : (int)hw;
}

void cvr::set_num_threads(int n) {
    thread_override.store(n < 0 ? 0 : n);
}

void cvr::parallel_for(size_t n, const std::function<void(size_t)> &body) {
    size_t workers = std::min<size_t>((size_t)num_threads(), n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; i++) {
            body(i);
        }
        return;
    }

    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::vector<std::string>> warnings(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (size_t w = 0; w < workers; w++) {
        size_t lo = n * w / workers;
        size_t hi = n * (w + 1) / workers;
        threads.emplace_back([&, w, lo, hi]() {
            try {
                for (size_t i = lo; i < hi; i++) {
                    body(i);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
            warnings[w] = take_warnings();
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    for (auto &ws : warnings) {
        for (auto &msg : ws) {
            warn(std::move(msg));
        }
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}
