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

// Small simulated tomography setups shared by the unit tests.

#include "credreg/rng.hpp"
#include "credreg/states.hpp"
#include "credreg/tomography.hpp"

namespace credreg::testing {

struct Setup {
    OperatorBasis basis;
    DensityMatrix truth;
    Pom pom;
    Dataset data;
    MlSummary summary;
};

/// Seeded state, SRM measurement, counts and ML summary. `mix` blends in the maximally mixed state.
inline Setup make_setup(int D, int rank, double mix, std::int64_t copies, std::uint64_t seed, int outcomes = 0) {
    const StreamFactory streams(seed);
    OperatorBasis basis = build_basis(D);
    Rng state_rng = streams.stream(Stage::true_state);
    const DensityMatrix ginibre = random_density(D, rank, state_rng);
    DensityMatrix truth((1.0 - mix) * ginibre.matrix() + (mix / D) * CMatrix::Identity(D, D));
    Rng pom_rng = streams.stream(Stage::measurement);
    Pom pom = random_srm_pom(D, outcomes > 0 ? outcomes : D * D * D, basis, pom_rng);
    Rng data_rng = streams.stream(Stage::data);
    Dataset data = simulate_counts(born_probabilities(truth, pom), copies, data_rng);
    const MlEstimate ml = ml_estimate(data, pom, basis);
    MlSummary summary = likelihood_summary(data, pom, basis, ml.rho);
    return Setup{std::move(basis), std::move(truth), std::move(pom), std::move(data), std::move(summary)};
}

/// First seed from `start` whose estimator has the requested rank.
inline Setup make_setup_with_rank(int D, int true_rank, int ml_rank, std::int64_t copies, std::uint64_t start = 1) {
    for (std::uint64_t seed = start; seed < start + 400; ++seed) {
        Setup s = make_setup(D, true_rank, 0.0, copies, seed);
        if (s.summary.rank == ml_rank) {
            return s;
        }
    }
    throw std::runtime_error("no seed produced the requested estimator rank");
}

} // namespace credreg::testing
