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
#include <optional>
#include <vector>

#include "credreg/rng.hpp"
#include "credreg/states.hpp"
#include "credreg/tomography.hpp"
#include "credreg/types.hpp"

namespace credreg {

struct Prior {
    enum class Kind { uniform, gaussian };

    Kind kind = Kind::uniform;
    BlochVector center;
    Matrix precision;

    static Prior uniform();
    /// Validates that `precision` is symmetric positive semidefinite.
    static Prior gaussian(BlochVector center, Matrix precision);
};

struct LineMarginal {
    double mean;
    double variance;
};

/// Restriction of a Gaussian prior to the line ref + beta * e.
LineMarginal line_gaussian_marginal(const Prior &prior, const BlochVector &ref, const Vector &direction);

struct SamplerConfig {
    /// Scale of the bounding ellipsoid, in [1, 2]. Values above 1 add an exact likelihood cut.
    double inflation = 1.0;
    int burn_in = 0;
    int thinning = 1;
    int max_shrinks = 10000;
    int max_restarts = 100;
};

struct ChainState {
    BlochVector current;
    std::int64_t steps_taken = 0;
    std::int64_t rejections = 0;
    std::int64_t restarts = 0;
};

struct SampleBatch {
    /// One accepted point per row.
    Matrix points;
    Vector log_likelihoods;
    std::uint64_t seed = 0;
    BlochVector start;
    std::int64_t rejections = 0;
    std::int64_t restarts = 0;
};

/// Exact region cut log L(x) >= threshold used with an inflated bounding body.
struct LikelihoodCut {
    const LogLikelihood *log_likelihood;
    double threshold;
};

/**
 * Accelerated hit-and-run over {PSD states} intersected with the region
 * ellipsoid. Rejected chord points shrink the chord toward the current point.
 */
class HitAndRun {
  public:
    HitAndRun(const RegionSpec &region, const Prior &prior, const OperatorBasis &basis,
              const SamplerConfig &config = {}, std::optional<LikelihoodCut> cut = std::nullopt);

    /// Both membership tests: positive state and inside the bounding ellipsoid.
    bool contains(const BlochVector &x);
    /// One accepted hit-and-run step.
    void advance(ChainState &state, Rng &rng);

  private:
    bool accept(const BlochVector &x);
    double draw_beta(double lo, double hi, const BlochVector &current, const Vector &direction, Rng &rng) const;

    Matrix shape_;
    BlochVector center_;
    Prior prior_;
    const OperatorBasis *basis_;
    SamplerConfig config_;
    std::optional<LikelihoodCut> cut_;
    PositivityTest psd_;
    CMatrix work_;
    Vector direction_;
    Vector delta_;
    Vector shape_direction_;
    Vector shape_delta_;
    BlochVector trial_;
};

SampleBatch hit_and_run_sample(const RegionSpec &region, const Prior &prior, const OperatorBasis &basis,
                               const LogLikelihood &log_likelihood, const BlochVector &start, int samples,
                               Rng &rng, const SamplerConfig &config = {},
                               std::optional<LikelihoodCut> cut = std::nullopt);

/**
 * Batch from the natural start of a region: the center in Case A and
 * find_interior_point (2D boundary searches) in Case B. Inflation above 1
 * adds the exact cut log L >= ln(lambda L_max).
 */
SampleBatch sample_region(const RegionSpec &region, const Prior &prior, const MlSummary &summary,
                          const OperatorBasis &basis, const LogLikelihood &log_likelihood, int samples, Rng &rng,
                          const SamplerConfig &config = {});

/// Draws from a standard normal truncated to [lo, hi] by inverse CDF.
double truncated_standard_normal(double lo, double hi, Rng &rng);

/// Strict interior point of a Case-B region from averaged boundary states.
BlochVector find_interior_point(const RegionSpec &region, const MlSummary &summary, const OperatorBasis &basis,
                                int n_boundary, Rng &rng);

/// Residual [(x - r_c) . A . (x - r_c) - 1]^2 minimized by find_interior_point.
double boundary_residual(const RegionSpec &region, const BlochVector &x);

std::vector<double> hopping_profile(const SampleBatch &batch);

enum class ComplexityCase { A, B_I, B_II };

/// Order-of-magnitude hit-and-run step counts, constants suppressed.
double mixing_step_estimate(const MlSummary &summary, ComplexityCase case_type);

} // namespace credreg
