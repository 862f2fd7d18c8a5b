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

#include <doctest.h>

#include "credreg/certify.hpp"
#include "credreg/error.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace credreg;

TEST_CASE("grid construction") {
    const LambdaGrid log_grid = LambdaGrid::make(GridSpacing::log, 50, 1e-8);
    REQUIRE(log_grid.size() == 50);
    CHECK(log_grid[0] == doctest::Approx(1e-8));
    CHECK(log_grid[49] == 1.0);
    for (std::size_t j = 1; j < 50; ++j) {
        CHECK(log_grid[j] > log_grid[j - 1]);
        CHECK(std::log(log_grid[j] / log_grid[j - 1]) == doctest::Approx(-std::log(1e-8) / 49.0));
    }
    const LambdaGrid linear = LambdaGrid::make(GridSpacing::linear, 11, 0.5);
    CHECK(linear[5] == doctest::Approx(0.75));
    const LambdaGrid hybrid = LambdaGrid::make(GridSpacing::hybrid, 30, 1e-10);
    CHECK(hybrid[0] == doctest::Approx(1e-10));
    CHECK(hybrid[29] == 1.0);
    CHECK(hybrid[28] == doctest::Approx(std::exp(-1e-3)));
    CHECK(LambdaGrid::make(GridSpacing::log, 0, 1e-3).empty());

    CHECK_THROWS_AS(LambdaGrid::make(GridSpacing::log, 10, 0.0), Error);
    CHECK_THROWS_AS(LambdaGrid::from_values({0.1, 0.1, 1.0}), Error);
    CHECK_THROWS_AS(LambdaGrid::from_values({0.1, 1.5}), Error);
}

TEST_CASE("default grid floor reaches the credibility tail") {
    CHECK(default_lambda_min(3) == doctest::Approx(1e-10));
    CHECK(default_lambda_min(8) == doctest::Approx(1e-10));
    const int d = 255;
    CHECK(default_lambda_min(d) < 1e-10);
    // the floor covers the bulk of the Case-A credibility curve
    CHECK(oracle::case_a_credibility(default_lambda_min(d), d) > 0.999);
}

TEST_CASE("batch-means error matches sigma / sqrt(n) for independent draws") {
    Rng rng(1);
    std::vector<double> x(40000);
    for (auto &v : x) {
        v = 2.0 * standard_normal(rng);
    }
    CHECK(batch_means_stderr(x) == doctest::Approx(2.0 / std::sqrt(40000.0)).epsilon(0.15));
    CHECK(std::isnan(batch_means_stderr(std::vector<double>{1.0})));
}

TEST_CASE("region average clips below-level samples") {
    SampleBatch batch;
    batch.log_likelihoods.resize(4);
    const double log_l_max = -10.0;
    const double lambda = std::exp(-2.0);
    batch.log_likelihoods << -10.0, -11.0, -12.5, -13.0;
    const UEstimate u = u_from_batch(batch, lambda, log_l_max);
    CHECK(u.clipped == 2);
    CHECK(u.samples == 4);
    CHECK(u.u == doctest::Approx((2.0 + 1.0) / 4.0));
}

namespace {

/// Grid and exact u, S for a Case-A region in d dimensions, with S normalized at lambda_min.
void case_a_profile(int d, const LambdaGrid &grid, std::vector<double> &u, std::vector<double> &S) {
    u.resize(grid.size());
    S.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        u[j] = -2.0 * std::log(grid[j]) / (d + 2.0);
        S[j] = std::pow(std::log(grid[j]) / std::log(grid[0]), d / 2.0);
    }
}

} // namespace

TEST_CASE("size spectrum from exact u reproduces the closed form") {
    const int d = 3;
    const LambdaGrid grid = LambdaGrid::make(GridSpacing::log, 200, 1e-10);
    std::vector<double> u, exact;
    case_a_profile(d, grid, u, exact);
    u.back() = 0.0;
    const auto trap = euler_size_spectrum(u, grid, OdeScheme::trapezoid);
    const auto forward = euler_size_spectrum(u, grid, OdeScheme::forward_euler);
    double worst_trap = 0.0;
    double worst_forward = 0.0;
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        worst_trap = std::max(worst_trap, std::abs(trap[j] - exact[j]));
        worst_forward = std::max(worst_forward, std::abs(forward[j] - exact[j]));
    }
    CHECK(trap[0] == 1.0);
    CHECK(trap.back() == 0.0);
    CHECK(worst_trap < 2e-3);
    CHECK(worst_forward < 0.15);
    CHECK(worst_trap < worst_forward);
}

TEST_CASE("size spectrum rejects a vanishing average before the last point") {
    const LambdaGrid grid = LambdaGrid::make(GridSpacing::log, 5, 1e-3);
    std::vector<double> u = {3.0, 2.0, 0.0, 0.5, 0.0};
    try {
        euler_size_spectrum(u, grid);
        FAIL("accepted u = 0 mid-grid");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::ill_conditioned);
        CHECK(std::string(e.what()).find("index 2") != std::string::npos);
    }
}

TEST_CASE("credibility of a linear size spectrum") {
    const LambdaGrid grid = LambdaGrid::make(GridSpacing::linear, 101, 1e-6);
    std::vector<double> S(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        S[j] = 1.0 - grid[j];
    }
    const auto C = credibility_spectrum(S, grid);
    CHECK(C[0] == 1.0);
    for (std::size_t j = 1; j < grid.size(); ++j) {
        const double lam = grid[j];
        // [lambda S + int_lambda^1 S] / int_0^1 S with S = 1 - lambda
        const double expected = (lam * (1.0 - lam) + 0.5 * (1.0 - lam) * (1.0 - lam)) / 0.5;
        CHECK(C[j] == doctest::Approx(expected).epsilon(1e-9));
        CHECK(C[j] <= C[j - 1]);
    }
    CHECK(lambda_crit(S, grid) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(lambda_crit(S, grid) == size_integral(S, grid));
}

TEST_CASE("Case-A credibility from the closed-form size spectrum") {
    const int d = 8;
    const LambdaGrid grid = LambdaGrid::make(GridSpacing::log, 400, default_lambda_min(d));
    std::vector<double> u, S;
    case_a_profile(d, grid, u, S);
    const auto C = credibility_spectrum(S, grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (C[j] > 0.05 && C[j] < 0.99) {
            CHECK(C[j] == doctest::Approx(oracle::case_a_credibility(grid[j], d)).epsilon(0.01));
        }
    }
}

TEST_CASE("state-space filtering baseline") {
    const auto s = testing::make_setup(2, 2, 0.3, 200, 3, 8);
    const LambdaGrid grid = LambdaGrid::make(GridSpacing::log, 30, 1e-6);
    Rng rng(4);
    const BaselineResult base = mc_filter_baseline(s.summary, s.pom, s.data.as_vector(), s.basis, grid, 200000, rng);
    CHECK(base.accepted == 200000);
    CHECK(base.proposals >= base.accepted);
    // the qubit state body is the whole ball, so every proposal is accepted
    CHECK(base.proposals == base.accepted);
    for (std::size_t j = 1; j < grid.size(); ++j) {
        CHECK(base.yield[j] <= base.yield[j - 1]);
        if (base.yield[j] > 0) {
            CHECK(base.C[j] <= base.C[j - 1] + 1e-15);
        }
    }
    CHECK(base.yield.back() == 0);
    CHECK(std::isnan(base.S.back()));

    const auto big = testing::make_setup(4, 4, 0.5, 1000, 3, 16);
    CHECK_THROWS_AS(mc_filter_baseline(big.summary, big.pom, big.data.as_vector(), big.basis, grid, 10, rng), Error);
}
