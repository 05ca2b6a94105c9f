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

#ifndef CVREPEATER_CORE_REGRESSION_HPP
#define CVREPEATER_CORE_REGRESSION_HPP

#include <vector>

namespace cvr {

struct LineFit {
    double slope;
    double intercept;
    double r2;
};

/// Ordinary least squares y = slope x + intercept. R^2 is 1 for a perfect fit
/// (including constant y).
LineFit fit_line(const std::vector<double> &x, const std::vector<double> &y);

}  // namespace cvr

#endif
