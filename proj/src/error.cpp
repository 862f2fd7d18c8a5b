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

#include "credreg/error.hpp"

namespace credreg {

const char *error_code_name(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::invalid_argument:
        return "invalid-argument";
    case ErrorCode::invalid_dimension:
        return "invalid-dimension";
    case ErrorCode::dimension_mismatch:
        return "dimension-mismatch";
    case ErrorCode::contract_violation:
        return "contract-violation";
    case ErrorCode::not_informationally_complete:
        return "not-informationally-complete";
    case ErrorCode::ill_conditioned:
        return "ill-conditioned";
    case ErrorCode::degenerate_direction:
        return "degenerate-direction";
    case ErrorCode::sampler_precondition:
        return "sampler-precondition";
    case ErrorCode::chord_stuck:
        return "chord-stuck";
    case ErrorCode::no_boundary_points:
        return "no-boundary-points";
    case ErrorCode::inconsistent_region:
        return "inconsistent-region";
    case ErrorCode::invalid_config:
        return "invalid-config";
    case ErrorCode::io_error:
        return "io-error";
    case ErrorCode::internal:
        return "internal";
    }
    return "unknown";
}

} // namespace credreg
