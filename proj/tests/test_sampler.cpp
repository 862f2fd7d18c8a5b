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

#include <numbers>

#include "credreg/certify.hpp"
#include "credreg/error.hpp"
#include "credreg/sampler.hpp"
#include "fixtures.hpp"

using namespace credreg;

namespace {

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0))); }

} // namespace

TEST_CASE("truncated normal stays in range and has the right mean") {
    Rng rng(1);
    const std::pair<double, double> intervals[] = {{-1.0, 2.0}, {0.5, 3.0}, {-7.0, -6.0}, {8.0, 9.5}};
    for (const auto &[lo, hi] : intervals) {
        double total = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const double z = truncated_standard_normal(lo, hi, rng);
            REQUIRE(z >= lo);
            REQUIRE(z <= hi);
            total += z;
        }
        double expected;
        if (lo > 5.0 || hi < -5.0) {
            // far tail: exponential approximation is adequate at this tolerance
            const double edge = lo > 0.0 ? lo : hi;
            expected = edge + (lo > 0.0 ? 1.0 : -1.0) / std::abs(edge);
        } else {
            expected = (normal_pdf(lo) - normal_pdf(hi)) / (normal_cdf(hi) - normal_cdf(lo));
        }
        CHECK(total / n == doctest::Approx(expected).epsilon(0.02));
    }
    CHECK(truncated_standard_normal(0.3, 0.3, rng) == 0.3);
    CHECK_THROWS_AS(truncated_standard_normal(1.0, 0.0, rng), Error);
}

TEST_CASE("line marginal of a Gaussian prior matches the restricted quadratic form") {
    Rng rng(2);
    const Matrix a = Matrix::Random(4, 4);
    const Matrix precision = a * a.transpose() + Matrix::Identity(4, 4);
    const Vector center = Vector::Random(4);
    const Prior prior = Prior::gaussian(center, precision);
    const Vector ref = Vector::Random(4);
    Vector e = Vector::Random(4);
    e.normalize();
    const LineMarginal line = line_gaussian_marginal(prior, ref, e);
    // -2 log density along the line is a quadratic in beta with curvature 1/variance and minimum at mean
    const auto energy = [&](double beta) {
        const Vector x = ref + beta * e - center;
        return x.dot(precision * x);
    };
    const double h = 1e-3;
    const double curvature = (energy(line.mean + h) - 2.0 * energy(line.mean) + energy(line.mean - h)) / (h * h);
    CHECK(curvature / 2.0 == doctest::Approx(1.0 / line.variance).epsilon(1e-6));
    CHECK(energy(line.mean + h) - energy(line.mean - h) == doctest::Approx(0.0).epsilon(1e-9));

    const Prior flat = Prior::gaussian(center, Matrix::Zero(4, 4));
    CHECK_THROWS_AS(line_gaussian_marginal(flat, ref, e), Error);
    CHECK_THROWS_AS(Prior::gaussian(center, -precision), Error);
}

TEST_CASE("uniform hit-and-run reproduces ellipsoid moments in Case A") {
    const auto s = testing::make_setup(2, 2, 0.5, 100000, 3, 16);
    const double lambda = 0.01;
    const RegionSpec region = region_spec(s.summary, lambda);
    const LogLikelihood log_l(s.data.as_vector(), s.pom);
    Rng rng(4);
    const SampleBatch batch = sample_region(region, Prior::uniform(), s.summary, s.basis, log_l, 40000, rng);
    const int d = 3;
    std::vector<double> q(static_cast<std::size_t>(batch.points.rows()));
    Vector mean = Vector::Zero(d);
    for (Eigen::Index k = 0; k < batch.points.rows(); ++k) {
        const Vector x = batch.points.row(k).transpose();
        REQUIRE(region.ellipsoid_value(x) <= 1.0 + 1e-9);
        q[static_cast<std::size_t>(k)] = region.ellipsoid_value(x);
        mean += x - region.center;
    }
    mean /= static_cast<double>(batch.points.rows());
    // uniform in a d-ball: E|y|^2 = d / (d + 2)
    double avg = 0.0;
    for (double v : q) {
        avg += v;
    }
    avg /= static_cast<double>(q.size());
    const double se = batch_means_stderr(q);
    CHECK(std::abs(avg - d / (d + 2.0)) < 4.0 * se);
    const double scale = std::sqrt(s.summary.fisher_inverse.trace());
    CHECK(mean.norm() < 0.05 * scale);
}

TEST_CASE("Gaussian-prior chain concentrates at the prior center") {
    const auto s = testing::make_setup(2, 2, 0.5, 100000, 5, 16);
    const RegionSpec region = region_spec(s.summary, 1e-4);
    const LogLikelihood log_l(s.data.as_vector(), s.pom);
    // precision much larger than the region's shape, so the prior dominates
    const Prior prior = Prior::gaussian(s.summary.r_ml, 50.0 * region.shape);
    Rng rng(6);
    const SampleBatch batch = sample_region(region, prior, s.summary, s.basis, log_l, 20000, rng);
    double q = 0.0;
    for (Eigen::Index k = 0; k < batch.points.rows(); ++k) {
        q += region.ellipsoid_value(batch.points.row(k).transpose());
    }
    q /= static_cast<double>(batch.points.rows());
    // E[y^T shape y] under N(0, (50 shape)^-1) is d / 50
    CHECK(q == doctest::Approx(3.0 / 50.0).epsilon(0.1));
}

TEST_CASE("sampler preconditions") {
    const auto s = testing::make_setup(2, 2, 0.5, 50000, 7, 16);
    const LogLikelihood log_l(s.data.as_vector(), s.pom);
    Rng rng(8);
    const RegionSpec region = region_spec(s.summary, 0.1);
    BlochVector outside = region.center;
    outside[0] += 10.0;
    try {
        hit_and_run_sample(region, Prior::uniform(), s.basis, log_l, outside, 10, rng);
        FAIL("outside start accepted");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::sampler_precondition);
    }
    const RegionSpec point = region_spec(s.summary, 1.0);
    CHECK_THROWS_AS(HitAndRun(point, Prior::uniform(), s.basis), Error);
    SamplerConfig inflated;
    inflated.inflation = 1.5;
    CHECK_THROWS_AS(HitAndRun(region, Prior::uniform(), s.basis, inflated), Error);
}

TEST_CASE("inflated body with likelihood cut keeps every sample above the level") {
    const auto s = testing::make_setup(2, 2, 0.3, 500, 9, 16);
    const LogLikelihood log_l(s.data.as_vector(), s.pom);
    const double lambda = 0.05;
    const RegionSpec region = region_spec(s.summary, lambda);
    SamplerConfig config;
    config.inflation = 2.0;
    Rng rng(10);
    const SampleBatch batch = sample_region(region, Prior::uniform(), s.summary, s.basis, log_l, 5000, rng, config);
    const double level = std::log(lambda) + s.summary.log_l_max;
    for (Eigen::Index k = 0; k < batch.log_likelihoods.size(); ++k) {
        CHECK(batch.log_likelihoods[k] >= level);
    }
    CHECK(u_from_batch(batch, lambda, s.summary.log_l_max).clipped == 0);
}

TEST_CASE("Case-B interior point is strictly inside the cap and the state space") {
    for (int D : {2, 3}) {
        const auto s = testing::make_setup_with_rank(D, 1, 1, 500L * D * D * D);
        const RegionSpec region = region_spec(s.summary, 0.1);
        Rng rng(12);
        const BlochVector x = find_interior_point(region, s.summary, s.basis, 2 * D, rng);
        CHECK(region.ellipsoid_value(x) < 1.0);
        CHECK(is_positive_state(r_to_rho(x, s.basis)));
        CHECK(boundary_residual(region, x) > 0.0);
    }
}

TEST_CASE("hopping profile and mixing estimates") {
    SampleBatch batch;
    batch.points.resize(3, 2);
    batch.points << 0.0, 0.0, 3.0, 4.0, 3.0, 4.0;
    const auto hops = hopping_profile(batch);
    REQUIRE(hops.size() == 2);
    CHECK(hops[0] == 5.0);
    CHECK(hops[1] == 0.0);

    const auto s = testing::make_setup(3, 3, 0.5, 20000, 13);
    CHECK(mixing_step_estimate(s.summary, ComplexityCase::B_I) == doctest::Approx(std::pow(3.0, 9)));
    const double a = mixing_step_estimate(s.summary, ComplexityCase::A);
    CHECK(a >= std::pow(3.0, 7));
    CHECK(a == mixing_step_estimate(s.summary, ComplexityCase::B_II));
}

TEST_CASE("sampling is reproducible for a fixed stream") {
    const auto s = testing::make_setup(2, 2, 0.5, 50000, 14, 16);
    const LogLikelihood log_l(s.data.as_vector(), s.pom);
    const RegionSpec region = region_spec(s.summary, 0.2);
    Rng a(99);
    Rng b(99);
    const SampleBatch x = sample_region(region, Prior::uniform(), s.summary, s.basis, log_l, 500, a);
    const SampleBatch y = sample_region(region, Prior::uniform(), s.summary, s.basis, log_l, 500, b);
    CHECK(x.points == y.points);
}
