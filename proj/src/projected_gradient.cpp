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

#include "credreg/projected_gradient.hpp"

#include <cmath>

#include "credreg/error.hpp"
#include "credreg/states.hpp"

namespace credreg {

namespace {

double inner(const CMatrix &a, const CMatrix &b) { return (a.conjugate().cwiseProduct(b)).sum().real(); }

constexpr int kMaxBacktracks = 80;
constexpr double kStepGrowth = 1.5;

} // namespace

ApgResult minimize_over_states(const StateObjective &objective, const CMatrix &start,
                               const ApgOptions &options) {
    require(options.max_iters >= 1, ErrorCode::invalid_argument, "max_iters must be positive");
    require(options.initial_step > 0.0, ErrorCode::invalid_argument, "initial step must be positive");

    ApgResult result;
    const Eigen::Index dim = start.rows();
    CMatrix rho = project_onto_states(start);
    CMatrix grad_rho(dim, dim);
    double f_rho = objective(rho, &grad_rho);
    require(std::isfinite(f_rho), ErrorCode::invalid_argument, "objective is not finite at the start point");
    result.values.push_back(f_rho);

    CMatrix y = rho;
    CMatrix grad_y = grad_rho;
    double f_y = f_rho;
    double theta = 1.0;
    double step = options.initial_step;
    bool momentum_active = false;

    auto stationarity = [&](const CMatrix &point, const CMatrix &grad) {
        const CMatrix moved = project_onto_states(point - step * grad);
        return (point - moved).norm() / step;
    };

    if (f_rho <= options.target_value || stationarity(rho, grad_rho) < options.tolerance) {
        result.converged = true;
    }

    int it = 0;
    while (!result.converged && it < options.max_iters) {
        ++it;
        CMatrix candidate;
        double f_candidate = std::numeric_limits<double>::infinity();
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            candidate = project_onto_states(y - step * grad_y);
            const CMatrix diff = candidate - y;
            f_candidate = objective(candidate, nullptr);
            const double bound = f_y + inner(grad_y, diff) + diff.squaredNorm() / (2.0 * step);
            if (std::isfinite(f_candidate) && f_candidate <= bound + 1e-15 * std::abs(f_y)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }

        if (!accepted || f_candidate > f_rho) {
            if (!momentum_active) {
                // a plain projected step from rho cannot decrease f at machine precision
                result.converged = true;
                break;
            }
            y = rho;
            grad_y = grad_rho;
            f_y = f_rho;
            theta = 1.0;
            momentum_active = false;
            continue;
        }

        const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
        const CMatrix previous = rho;
        rho = candidate;
        f_rho = objective(rho, &grad_rho);
        result.values.push_back(f_rho);

        if (f_rho <= options.target_value || stationarity(rho, grad_rho) < options.tolerance) {
            result.converged = true;
            break;
        }

        y = rho + ((theta - 1.0) / theta_next) * (rho - previous);
        y = (y + y.adjoint()).eval() / 2.0;
        f_y = objective(y, &grad_y);
        momentum_active = true;
        if (!std::isfinite(f_y)) {
            y = rho;
            grad_y = grad_rho;
            f_y = f_rho;
            momentum_active = false;
        }
        theta = theta_next;
        step *= kStepGrowth;
    }

    result.rho = rho;
    result.value = f_rho;
    result.iterations = it;
    return result;
}

} // namespace credreg
