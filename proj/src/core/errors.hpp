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

#ifndef CVREPEATER_CORE_ERRORS_HPP
#define CVREPEATER_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace cvr {

enum class ErrorKind {
    kArgument = 1,
    kDomain = 2,
    kDegenerate = 3,
    kConvergence = 4,
    kSubcritical = 5,
    kNumerical = 6,
};

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

struct ArgumentError : Error {
    explicit ArgumentError(const std::string &msg) : Error(ErrorKind::kArgument, msg) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string &msg) : Error(ErrorKind::kDomain, msg) {}
};
/// Zero-probability outcome or a channel that transmits nothing.
struct DegenerateError : Error {
    explicit DegenerateError(const std::string &msg) : Error(ErrorKind::kDegenerate, msg) {}
};
/// Truncation or iteration did not reach the requested accuracy.
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string &msg) : Error(ErrorKind::kConvergence, msg) {}
};
/// Multiplexing too weak for the envelope equation to have a root.
struct SubcriticalError : Error {
    explicit SubcriticalError(const std::string &msg) : Error(ErrorKind::kSubcritical, msg) {}
};
struct NumericalError : Error {
    explicit NumericalError(const std::string &msg) : Error(ErrorKind::kNumerical, msg) {}
};

/// Records a non-fatal diagnostic (e.g. truncation tail mass) on the calling thread.
void warn(std::string msg);

/// Returns and clears the calling thread's pending warnings.
std::vector<std::string> take_warnings();

}  // namespace cvr

#endif
