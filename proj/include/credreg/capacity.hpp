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

#include <vector>

#include "credreg/certify.hpp"
#include "credreg/sampler.hpp"
#include "credreg/types.hpp"

namespace credreg {

enum class DistanceMeasure { hilbert_schmidt, trace, bures };

const char *distance_measure_name(DistanceMeasure measure) noexcept;

/// (tr sqrt(sqrt(a) b sqrt(a)))^2 with negative eigenvalues clamped.
double fidelity(const CMatrix &rho_a, const CMatrix &rho_b);

/// HS: tr((a - b)^2); trace: sum |eig(a - b)|; Bures: 2 (1 - sqrt(F)).
double state_distance(const CMatrix &rho_a, const CMatrix &rho_b, DistanceMeasure measure);

/// Distances to a fixed reference state with its square root cached.
class ReferenceDistance {
  public:
    explicit ReferenceDistance(const CMatrix &reference);

    [[nodiscard]] double fidelity(const CMatrix &rho) const;
    [[nodiscard]] double operator()(const CMatrix &rho, DistanceMeasure measure) const;

  private:
    CMatrix reference_;
    CMatrix sqrt_reference_;
};

struct CapacityEstimate {
    double mean;
    double stderr;
};

/// Mean distance of the batch points from `reference`, with a batch-means error.
CapacityEstimate capacity_from_batch(const SampleBatch &batch, const CMatrix &reference,
                                     const OperatorBasis &basis, DistanceMeasure measure);

struct CapacitySpectrum {
    LambdaGrid grid;
    DistanceMeasure measure;
    std::vector<double> mean;
    std::vector<double> stderr;
};

/// Per lambda: mean distance from the ML estimator over a fresh region batch.
CapacitySpectrum capacity_spectrum(const MlSummary &summary, const LambdaGrid &grid, const Prior &prior,
                                   DistanceMeasure measure, const OperatorBasis &basis,
                                   const LogLikelihood &log_likelihood, int samples, Rng &rng,
                                   const SamplerConfig &config = {});

/// 8 sqrt(D S_hs) / (3 pi).
double tr_hs_asymptotic(double S_hs, int dimension);

} // namespace credreg
