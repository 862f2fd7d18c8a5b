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

#include "credreg/rng.hpp"

namespace credreg {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31U);
}

std::uint64_t StreamFactory::seed_for(Stage stage, std::uint64_t index) const noexcept {
    const auto stage_key = splitmix64(static_cast<std::uint64_t>(stage));
    return splitmix64(splitmix64(master_ ^ stage_key) + index);
}

Rng StreamFactory::stream(Stage stage, std::uint64_t index) const {
    issued_.fetch_add(1, std::memory_order_relaxed);
    return Rng(seed_for(stage, index));
}

double standard_normal(Rng &rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

double uniform01(Rng &rng) {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

Vector standard_normal_vector(Rng &rng, Eigen::Index n) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = dist(rng);
    }
    return v;
}

CMatrix complex_gaussian_matrix(Rng &rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> dist(0.0, 1.0);
    CMatrix g(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double re = dist(rng);
            const double im = dist(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

} // namespace credreg
