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

#include <Eigen/Eigenvalues>

#include "credreg/error.hpp"
#include "credreg/tomography.hpp"
#include "fixtures.hpp"

using namespace credreg;

TEST_CASE("SRM measurement is a complete, positive, informationally complete POM") {
    Rng rng(1);
    for (int D : {2, 3, 4}) {
        const OperatorBasis basis(D);
        const Pom pom = random_srm_pom(D, D * D * D, basis, rng);
        CMatrix total = CMatrix::Zero(D, D);
        for (const CMatrix &outcome : pom.outcomes()) {
            Eigen::SelfAdjointEigenSolver<CMatrix> eig(outcome, Eigen::EigenvaluesOnly);
            CHECK(eig.eigenvalues().minCoeff() > -1e-12);
            total += outcome;
        }
        CHECK((total - CMatrix::Identity(D, D)).norm() < 1e-10);
        CHECK(pom.informationally_complete());
        CHECK(pom.jacobian().rows() == D * D * D);
        CHECK(pom.jacobian().colwise().sum().norm() < 1e-10);
    }
    const OperatorBasis basis(3);
    try {
        random_srm_pom(3, 8, basis, rng);
        FAIL("too few outcomes accepted");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::not_informationally_complete);
    }
}

TEST_CASE("Born probabilities match the affine coordinate map") {
    Rng rng(2);
    const OperatorBasis basis(3);
    const Pom pom = random_srm_pom(3, 27, basis, rng);
    const DensityMatrix rho = random_density(3, 3, rng);
    const Vector p = born_probabilities(rho, pom);
    const Vector affine = pom.offset() + pom.jacobian() * rho_to_r(rho, basis);
    CHECK((p - affine).norm() < 1e-12);
    CHECK(p.sum() == doctest::Approx(1.0));
}

TEST_CASE("simulated counts sum to N and are reproducible") {
    Vector p(4);
    p << 0.1, 0.2, 0.3, 0.4;
    Rng a(5);
    Rng b(5);
    const Dataset x = simulate_counts(p, 100000, a);
    const Dataset y = simulate_counts(p, 100000, b);
    CHECK(x.total() == 100000);
    CHECK(x.counts == y.counts);
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(x.counts[static_cast<std::size_t>(k)] / 1e5 - p[k]) < 5e-3);
    }
}

TEST_CASE("log-likelihood agrees with the direct sum and detects impossible data") {
    Rng rng(3);
    const OperatorBasis basis(2);
    const Pom pom = random_srm_pom(2, 8, basis, rng);
    const DensityMatrix rho = random_density(2, 2, rng);
    const Dataset data = simulate_counts(born_probabilities(rho, pom), 1000, rng);
    const BlochVector r = rho_to_r(rho, basis);
    const Vector p = born_probabilities(rho, pom);
    double direct = 0.0;
    for (int j = 0; j < pom.size(); ++j) {
        direct += data.counts[static_cast<std::size_t>(j)] * std::log(p[j]);
    }
    CHECK(log_likelihood(data, r, pom) == doctest::Approx(direct).epsilon(1e-12));
    const LogLikelihood cached(data.as_vector(), pom);
    CHECK(cached(r) == doctest::Approx(direct).epsilon(1e-12));

    // far outside the state space some outcome probability is negative
    BlochVector far = BlochVector::Zero(basis.size());
    far[0] = 100.0;
    const Vector far_p = pom.offset() + pom.jacobian() * far;
    REQUIRE(far_p.minCoeff() < 0.0);
    CHECK(log_likelihood(Vector::Ones(pom.size()), far, pom) == kLogZero);
    CHECK(cached(far) == kLogZero);
}

TEST_CASE("ML estimation recovers the state from exact frequencies") {
    Rng rng(4);
    for (int D : {2, 3}) {
        const OperatorBasis basis(D);
        const Pom pom = random_srm_pom(D, D * D * D, basis, rng);
        const DensityMatrix truth(0.6 * random_density(D, D, rng).matrix() + (0.4 / D) * CMatrix::Identity(D, D));
        const Vector counts = 1e6 * born_probabilities(truth, pom);
        const MlEstimate ml = ml_estimate(counts, pom, basis);
        CHECK(ml.converged);
        CHECK((ml.rho.matrix() - truth.matrix()).norm() < 1e-5);
        for (std::size_t k = 1; k < ml.log_likelihood_trace.size(); ++k) {
            CHECK(ml.log_likelihood_trace[k] >= ml.log_likelihood_trace[k - 1] - 1e-9 * std::abs(ml.log_likelihood_trace[k]));
        }
    }
}

TEST_CASE("full-rank summary is Case A with a vanishing score") {
    const auto s = testing::make_setup(2, 2, 0.5, 100000, 1, 16);
    const MlSummary &m = s.summary;
    CHECK(m.case_label == CaseLabel::A);
    CHECK(m.rank == 2);
    CHECK(m.score_consistent);
    CHECK(m.score_quadratic == 0.0);
    CHECK((m.r_c - m.r_ml).norm() == 0.0);
    CHECK(m.log_l_prime_max == m.log_l_max);
    CHECK((m.fisher * m.fisher_inverse - Matrix::Identity(3, 3)).norm() < 1e-8);
    CHECK(m.eigenvalues[0] >= m.eigenvalues[1]);
}

TEST_CASE("rank-deficient summary is Case B with a consistent shifted center") {
    const auto s = testing::make_setup_with_rank(2, 1, 1, 100000);
    const MlSummary &m = s.summary;
    CHECK(m.case_label == CaseLabel::B);
    CHECK((m.r_c - (m.r_ml + m.fisher_inverse * m.score)).norm() < 1e-12);
    CHECK(m.score_quadratic == doctest::Approx(m.score.dot(m.fisher_inverse * m.score)));
    CHECK(m.score_quadratic > 0.0);
    CHECK(m.log_l_prime_max == doctest::Approx(m.log_l_max + 0.5 * m.score_quadratic));
    // the score points out of the state space: moving along F^-1 g leaves the positive cone
    const Vector outward = m.fisher_inverse * m.score;
    CHECK_FALSE(is_positive_state(r_to_rho(m.r_ml + 1e-3 * outward / outward.norm(), s.basis)));
}

TEST_CASE("region geometry") {
    const auto a = testing::make_setup(2, 2, 0.5, 50000, 2, 16);
    const RegionSpec point = region_spec(a.summary, 1.0);
    CHECK(point.degenerate);
    CHECK(point.shape.size() == 0);

    const RegionSpec r = region_spec(a.summary, 0.1);
    CHECK_FALSE(r.degenerate);
    CHECK(r.lambda_prime == doctest::Approx(0.1));
    CHECK((r.shape - a.summary.fisher / (-2.0 * std::log(0.1))).norm() < 1e-9 * r.shape.norm());
    CHECK(r.ellipsoid_value(r.center) == 0.0);

    const auto b = testing::make_setup_with_rank(2, 1, 1, 100000);
    const double lambda = 1e-3;
    const RegionSpec cap = region_spec(b.summary, lambda);
    // 2 ln(lambda / lambda') = g . F^-1 . g
    CHECK(2.0 * (std::log(lambda) - cap.log_lambda_prime) == doctest::Approx(b.summary.score_quadratic));
    CHECK(cap.cap_l == doctest::Approx(std::sqrt(b.summary.score_quadratic / (-2.0 * cap.log_lambda_prime))));
    CHECK((cap.normal - b.summary.score / b.summary.score.norm()).norm() < 1e-12);
    // the estimator itself sits on the cap plane inside the ellipsoid
    CHECK(cap.ellipsoid_value(b.summary.r_ml) == doctest::Approx(cap.cap_l * cap.cap_l));

    CHECK_THROWS_AS(region_spec(a.summary, 0.0), Error);
    CHECK_THROWS_AS(region_spec(a.summary, 1.5), Error);
}
