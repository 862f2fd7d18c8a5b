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

#include <atomic>
#include <cstdint>
#include <random>

#include "credreg/types.hpp"

namespace credreg {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Pipeline stages that own an independent random stream.
enum class Stage : std::uint64_t {
    true_state = 1,
    measurement = 2,
    data = 3,
    sampling = 4,
    interior = 5,
    baseline = 6,
    calibration = 7,
    correlation = 8,
};

/**
 * Derives independent engines from one master seed.
 *
 * The seed of stream (stage, index) is
 * splitmix64(splitmix64(master ^ splitmix64(stage)) + index), so adding
 * streams never perturbs existing ones.
 */
class StreamFactory {
  public:
    explicit StreamFactory(std::uint64_t master_seed) : master_(master_seed) {}

    [[nodiscard]] std::uint64_t seed_for(Stage stage, std::uint64_t index) const noexcept;
    [[nodiscard]] Rng stream(Stage stage, std::uint64_t index = 0) const;
    [[nodiscard]] std::uint64_t master_seed() const noexcept { return master_; }
    [[nodiscard]] std::uint64_t streams_issued() const noexcept {
        return issued_.load(std::memory_order_relaxed);
    }

  private:
    std::uint64_t master_;
    mutable std::atomic<std::uint64_t> issued_{0};
};

double standard_normal(Rng &rng);
double uniform01(Rng &rng);
Vector standard_normal_vector(Rng &rng, Eigen::Index n);
CMatrix complex_gaussian_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols);

} // namespace credreg
