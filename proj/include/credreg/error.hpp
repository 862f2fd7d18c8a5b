// Copyright 2026 The credreg Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace credreg {

/// Failure categories shared by the library and the C API.
enum class ErrorCode {
    invalid_argument = 1,
    invalid_dimension,
    dimension_mismatch,
    contract_violation,
    not_informationally_complete,
    ill_conditioned,
    degenerate_direction,
    sampler_precondition,
    chord_stuck,
    no_boundary_points,
    inconsistent_region,
    invalid_config,
    io_error,
    internal,
};

const char *error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &message) {
    throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string &message) {
    if (!condition) {
        fail(code, message);
    }
}

} // namespace credreg
