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

#include <functional>
#include <limits>
#include <vector>

#include "credreg/types.hpp"

namespace credreg {

/**
 * Objective over density matrices. Returns the value at `rho` and, when
 * `gradient` is non-null, writes the Hermitian gradient operator G such that
 * df = Re tr(G drho). Values outside the domain are +infinity.
 */
using StateObjective = std::function<double(const CMatrix &rho, CMatrix *gradient)>;

struct ApgOptions {
    int max_iters = 5000;
    double tolerance = 1e-8;
    double initial_step = 1.0;
    double target_value = -std::numeric_limits<double>::infinity();
};

struct ApgResult {
    CMatrix rho;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> values;
};

/// Accelerated projected gradient descent with backtracking and restart.
ApgResult minimize_over_states(const StateObjective &objective, const CMatrix &start,
                               const ApgOptions &options);

} // namespace credreg
