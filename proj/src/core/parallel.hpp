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

#ifndef CVREPEATER_CORE_PARALLEL_HPP
#define CVREPEATER_CORE_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace cvr {

/// Worker count: explicit override if set, else CVR_NUM_THREADS, else hardware concurrency.
int num_threads();
void set_num_threads(int n);

/// Runs body(i) for i in [0, n). Indices are split into contiguous chunks, so any
/// per-index output written by the body is independent of the thread count.
/// The first exception thrown by a worker is rethrown on the caller; warnings
/// raised on workers are forwarded to the caller in index order.
void parallel_for(size_t n, const std::function<void(size_t)> &body);

}  // namespace cvr

#endif
