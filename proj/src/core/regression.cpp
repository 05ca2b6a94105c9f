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

#include "core/regression.hpp"

#include "core/errors.hpp"

cvr::LineFit cvr::fit_line(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ArgumentError("line fit needs at least two paired samples");
    }
    double n = (double)x.size();
    double mx = 0, my = 0;
    for (size_t k = 0; k < x.size(); k++) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t k = 0; k < x.size(); k++) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0) {
        throw ArgumentError("line fit needs at least two distinct abscissae");
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (size_t k = 0; k < x.size(); k++) {
        double r = y[k] - (f.slope * x[k] + f.intercept);
        ss_res += r * r;
    }
    f.r2 = syy == 0 ? 1.0 : 1 - ss_res / syy;
    return f;
}
