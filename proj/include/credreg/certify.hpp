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

#include <cstdint>
#include <span>
#include <vector>

#include "credreg/rng.hpp"
#include "credreg/sampler.hpp"
#include "credreg/tomography.hpp"

namespace credreg {

enum class GridSpacing { log, linear, hybrid };

const char *grid_spacing_name(GridSpacing spacing) noexcept;

/// Strictly increasing lambda values in (0, 1].
class LambdaGrid {
  public:
    LambdaGrid() = default;

    /**
     * log: `points` log-spaced values from lambda_min to 1.
     * linear: evenly spaced values from lambda_min to 1.
     * hybrid: lambda = exp(-x) with x geometric from -ln(lambda_min) down to
     * 1e-3, followed by lambda = 1.
     */
    static LambdaGrid make(GridSpacing spacing, int points, double lambda_min);
    static LambdaGrid from_values(std::vector<double> values, GridSpacing spacing = GridSpacing::log);

    [[nodiscard]] const std::vector<double> &values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] bool empty() const noexcept { return values_.empty(); }
    [[nodiscard]] double operator[](std::size_t j) const { return values_[j]; }
    [[nodiscard]] GridSpacing spacing() const noexcept { return spacing_; }

  private:
    std::vector<double> values_;
    GridSpacing spacing_ = GridSpacing::log;
};

/// Smallest grid lambda for a d-parameter region: 1e-10 scaled down for large d.
double default_lambda_min(int d);

/// Standard error of the mean from sqrt(n) non-overlapping batch means.
double batch_means_stderr(std::span<const double> values);

struct UEstimate {
    double u;
    double stderr;
    std::int64_t clipped;
    std::int64_t samples;
};

/// Mean of q = log L(x) - ln(lambda L_max) over a batch, clipping q at 0.
UEstimate u_from_batch(const SampleBatch &batch, double lambda, double log_l_max);

UEstimate estimate_u(const RegionSpec &region, const Prior &prior, const MlSummary &summary,
                     const OperatorBasis &basis, const LogLikelihood &log_likelihood, int samples, Rng &rng,
                     const SamplerConfig &config = {});

enum class OdeScheme { forward_euler, trapezoid };

const char *ode_scheme_name(OdeScheme scheme) noexcept;

/**
 * Relative size spectrum from region averages u on the grid, S[0] = 1.
 *
 * forward_euler: y[j+1] = y[j] - (y[j]/u[j]) (lambda[j+1] - lambda[j]) / lambda[j].
 * trapezoid: y[j+1] = y[j] (1 - h/(2u[j])) / (1 + h/(2u[j+1])), h = ln(lambda[j+1]/lambda[j]).
 * S[j] = y[j]/u[j]; y is clamped at 0 and u = 0 is allowed at the final point only.
 */
std::vector<double> euler_size_spectrum(std::span<const double> u, const LambdaGrid &grid,
                                        OdeScheme scheme = OdeScheme::forward_euler);

/// Trapezoid integral of S over [0, 1]; S is held at S[0] below the grid and falls to 0 at lambda = 1.
double size_integral(std::span<const double> S, const LambdaGrid &grid);

std::vector<double> credibility_spectrum(std::span<const double> S, const LambdaGrid &grid);

double lambda_crit(std::span<const double> S, const LambdaGrid &grid);

struct BaselineResult {
    std::vector<double> S;
    std::vector<double> C;
    std::vector<std::int64_t> yield;
    std::int64_t proposals = 0;
    std::int64_t accepted = 0;
};

/// Uniform rejection sampling of the whole state body followed by likelihood filtering.
BaselineResult mc_filter_baseline(const MlSummary &summary, const Pom &pom, const Vector &counts,
                                  const OperatorBasis &basis, const LambdaGrid &grid, std::int64_t samples,
                                  Rng &rng);

} // namespace credreg
