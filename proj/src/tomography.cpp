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

#include "credreg/tomography.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "credreg/error.hpp"
#include "credreg/projected_gradient.hpp"

namespace credreg {

namespace {

constexpr double kPomTolerance = 1e-10;
constexpr int kMaxPomAttempts = 100;

double trace_product(const CMatrix &rho, const CMatrix &hermitian) {
    return (hermitian.conjugate().cwiseProduct(rho)).sum().real();
}

void check_counts(const Vector &counts, const Pom &pom) {
    require(counts.size() == pom.size(), ErrorCode::dimension_mismatch,
            "dataset has " + std::to_string(counts.size()) + " outcomes, measurement has " +
                std::to_string(pom.size()));
    require((counts.array() >= 0.0).all(), ErrorCode::invalid_argument, "counts must be nonnegative");
    require(counts.sum() > 0.0, ErrorCode::invalid_argument, "dataset must contain at least one count");
}

} // namespace

Pom::Pom(std::vector<CMatrix> outcomes, const OperatorBasis &basis)
    : dim_(basis.dimension()), outcomes_(std::move(outcomes)), complete_(false) {
    require(!outcomes_.empty(), ErrorCode::invalid_argument, "measurement needs at least one outcome");
    const int m = size();
    const int d = basis.size();
    CMatrix total = CMatrix::Zero(dim_, dim_);
    jacobian_.resize(m, d);
    offset_.resize(m);
    for (int j = 0; j < m; ++j) {
        const CMatrix &pi = outcomes_[static_cast<std::size_t>(j)];
        require(pi.rows() == dim_ && pi.cols() == dim_, ErrorCode::dimension_mismatch,
                "outcome " + std::to_string(j) + " has the wrong size");
        require((pi - pi.adjoint()).cwiseAbs().maxCoeff() <= kPomTolerance, ErrorCode::contract_violation,
                "outcome " + std::to_string(j) + " is not Hermitian");
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(pi, Eigen::EigenvaluesOnly);
        require(eig.eigenvalues().minCoeff() >= -kPomTolerance, ErrorCode::contract_violation,
                "outcome " + std::to_string(j) + " is not positive semidefinite");
        total += pi;
        jacobian_.row(j) = basis.coordinates(pi).transpose();
        offset_[j] = pi.trace().real() / dim_;
    }
    require((total - CMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() <= kPomTolerance,
            ErrorCode::contract_violation, "measurement outcomes do not sum to the identity");
    Eigen::JacobiSVD<Matrix> svd(jacobian_);
    const Vector s = svd.singularValues();
    int numerical_rank = 0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s[k] > 1e-10 * std::max(1.0, s[0])) {
            ++numerical_rank;
        }
    }
    complete_ = numerical_rank == d;
}

Pom random_srm_pom(int dimension, int outcomes, const OperatorBasis &basis, Rng &rng) {
    require(basis.dimension() == dimension, ErrorCode::dimension_mismatch, "basis dimension mismatch");
    require(outcomes >= dimension * dimension, ErrorCode::not_informationally_complete,
            "a square-root measurement needs at least D^2 = " + std::to_string(dimension * dimension) +
                " outcomes, got " + std::to_string(outcomes));
    for (int attempt = 0; attempt < kMaxPomAttempts; ++attempt) {
        std::vector<CVector> kets;
        kets.reserve(static_cast<std::size_t>(outcomes));
        CMatrix frame = CMatrix::Zero(dimension, dimension);
        for (int j = 0; j < outcomes; ++j) {
            CVector psi = complex_gaussian_matrix(rng, dimension, 1).col(0);
            psi.normalize();
            frame += psi * psi.adjoint();
            kets.push_back(std::move(psi));
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(frame);
        const Vector ev = eig.eigenvalues();
        if (ev.minCoeff() <= 1e-12 * ev.maxCoeff()) {
            continue;
        }
        const CMatrix inv_sqrt =
            eig.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().adjoint();
        std::vector<CMatrix> pis;
        pis.reserve(kets.size());
        for (const CVector &psi : kets) {
            const CVector phi = inv_sqrt * psi;
            CMatrix pi = phi * phi.adjoint();
            pis.push_back((pi + pi.adjoint()) / 2.0);
        }
        Pom pom(std::move(pis), basis);
        if (pom.informationally_complete()) {
            return pom;
        }
    }
    fail(ErrorCode::ill_conditioned, "no informationally complete square-root measurement after " +
                                         std::to_string(kMaxPomAttempts) + " draws");
}

Vector born_probabilities(const CMatrix &rho, const Pom &pom) {
    require(rho.rows() == pom.dimension() && rho.cols() == pom.dimension(), ErrorCode::dimension_mismatch,
            "state and measurement dimensions differ");
    Vector p(pom.size());
    for (int j = 0; j < pom.size(); ++j) {
        const double pj = trace_product(rho, pom.outcomes()[static_cast<std::size_t>(j)]);
        require(pj >= -1e-10, ErrorCode::contract_violation, "negative outcome probability");
        p[j] = pj < 1e-12 ? std::max(pj, 0.0) : pj;
    }
    require(std::abs(p.sum() - 1.0) <= 1e-10, ErrorCode::contract_violation, "probabilities do not sum to one");
    return p;
}

Vector born_probabilities(const DensityMatrix &rho, const Pom &pom) {
    return born_probabilities(rho.matrix(), pom);
}

std::int64_t Dataset::total() const noexcept {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

Vector Dataset::as_vector() const {
    Vector v(static_cast<Eigen::Index>(counts.size()));
    for (std::size_t j = 0; j < counts.size(); ++j) {
        v[static_cast<Eigen::Index>(j)] = static_cast<double>(counts[j]);
    }
    return v;
}

Dataset simulate_counts(const Vector &probabilities, std::int64_t copies, Rng &rng) {
    require(copies >= 1, ErrorCode::invalid_argument, "number of copies must be positive");
    require(probabilities.size() >= 1, ErrorCode::invalid_argument, "empty probability vector");
    require((probabilities.array() >= -1e-12).all(), ErrorCode::invalid_argument, "negative probability");
    require(std::abs(probabilities.sum() - 1.0) <= 1e-10, ErrorCode::invalid_argument,
            "probabilities do not sum to one");
    Dataset data;
    data.counts.assign(static_cast<std::size_t>(probabilities.size()), 0);
    std::int64_t remaining = copies;
    double remaining_mass = 1.0;
    for (Eigen::Index j = 0; j < probabilities.size() && remaining > 0; ++j) {
        const double pj = std::max(probabilities[j], 0.0);
        if (j == probabilities.size() - 1) {
            data.counts[static_cast<std::size_t>(j)] = remaining;
            break;
        }
        const double share = remaining_mass > 0.0 ? std::clamp(pj / remaining_mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::int64_t> binom(remaining, share);
        const std::int64_t nj = binom(rng);
        data.counts[static_cast<std::size_t>(j)] = nj;
        remaining -= nj;
        remaining_mass -= pj;
    }
    return data;
}

double log_likelihood(const Vector &counts, const BlochVector &r, const Pom &pom) {
    require(counts.size() == pom.size(), ErrorCode::dimension_mismatch, "count vector length mismatch");
    require(r.size() == pom.jacobian().cols(), ErrorCode::dimension_mismatch, "coordinate length mismatch");
    double total = 0.0;
    for (int j = 0; j < pom.size(); ++j) {
        if (counts[j] <= 0.0) {
            continue;
        }
        const double p = pom.offset()[j] + pom.jacobian().row(j).dot(r);
        if (!(p > 0.0)) {
            return kLogZero;
        }
        total += counts[j] * std::log(p);
    }
    return total;
}

double log_likelihood(const Dataset &data, const BlochVector &r, const Pom &pom) {
    return log_likelihood(data.as_vector(), r, pom);
}

LogLikelihood::LogLikelihood(const Vector &counts, const Pom &pom) {
    check_counts(counts, pom);
    std::vector<int> observed;
    for (int j = 0; j < pom.size(); ++j) {
        if (counts[j] > 0.0) {
            observed.push_back(j);
        }
    }
    const auto k = static_cast<Eigen::Index>(observed.size());
    counts_.resize(k);
    offset_.resize(k);
    jacobian_.resize(pom.jacobian().cols(), k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const int j = observed[static_cast<std::size_t>(i)];
        counts_[i] = counts[j];
        offset_[i] = pom.offset()[j];
        jacobian_.col(i) = pom.jacobian().row(j).transpose();
    }
    copies_ = counts.sum();
}

double LogLikelihood::operator()(const BlochVector &r) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < counts_.size(); ++i) {
        const double p = offset_[i] + jacobian_.col(i).dot(r);
        if (!(p > 0.0)) {
            return kLogZero;
        }
        total += counts_[i] * std::log(p);
    }
    return total;
}

MlEstimate ml_estimate(const Vector &counts, const Pom &pom, const OperatorBasis &basis,
                       const MlConfig &config) {
    check_counts(counts, pom);
    require(pom.dimension() == basis.dimension(), ErrorCode::dimension_mismatch,
            "measurement and basis dimensions differ");
    require(pom.informationally_complete(), ErrorCode::not_informationally_complete,
            "maximum likelihood requires an informationally complete measurement");
    const double copies = counts.sum();
    const Vector freq = counts / copies;
    const auto &pis = pom.outcomes();
    const int dim = pom.dimension();

    StateObjective objective = [&](const CMatrix &rho, CMatrix *gradient) {
        double value = 0.0;
        if (gradient != nullptr) {
            gradient->setZero(dim, dim);
        }
        for (int j = 0; j < pom.size(); ++j) {
            if (freq[j] <= 0.0) {
                continue;
            }
            const CMatrix &pi = pis[static_cast<std::size_t>(j)];
            const double p = trace_product(rho, pi);
            if (!(p > 0.0)) {
                return std::numeric_limits<double>::infinity();
            }
            value -= freq[j] * std::log(p);
            if (gradient != nullptr) {
                *gradient -= (freq[j] / p) * pi;
            }
        }
        return value;
    };

    ApgOptions options;
    options.max_iters = config.max_iters;
    options.tolerance = config.tolerance;
    const CMatrix start = CMatrix::Identity(dim, dim) / static_cast<double>(dim);
    ApgResult apg = minimize_over_states(objective, start, options);

    std::vector<double> trace;
    trace.reserve(apg.values.size());
    for (double v : apg.values) {
        trace.push_back(-copies * v);
    }
    return MlEstimate{DensityMatrix(apg.rho), apg.converged, apg.iterations, std::move(trace)};
}

MlEstimate ml_estimate(const Dataset &data, const Pom &pom, const OperatorBasis &basis,
                       const MlConfig &config) {
    return ml_estimate(data.as_vector(), pom, basis, config);
}

MlSummary likelihood_summary(const Vector &counts, const Pom &pom, const OperatorBasis &basis,
                             const CMatrix &rho_ml) {
    check_counts(counts, pom);
    require(rho_ml.rows() == basis.dimension(), ErrorCode::dimension_mismatch, "estimator dimension mismatch");
    const int dim = basis.dimension();
    const int d = basis.size();
    const Matrix &jac = pom.jacobian();

    require(jac.colwise().sum().cwiseAbs().maxCoeff() <= 1e-9, ErrorCode::internal,
            "probability gradients do not sum to zero");

    MlSummary s;
    s.dimension = dim;
    s.rho_ml = (rho_ml + rho_ml.adjoint()) / 2.0;
    s.r_ml = basis.coordinates(s.rho_ml);
    s.copies = counts.sum();
    s.log_l_max = log_likelihood(counts, s.r_ml, pom);
    require(std::isfinite(s.log_l_max), ErrorCode::ill_conditioned,
            "estimator assigns zero probability to an observed outcome");

    s.fisher = Matrix::Zero(d, d);
    s.score = Vector::Zero(d);
    for (int j = 0; j < pom.size(); ++j) {
        if (counts[j] <= 0.0) {
            continue;
        }
        const double p = pom.offset()[j] + jac.row(j).dot(s.r_ml);
        const Vector grad = jac.row(j).transpose();
        s.fisher.noalias() += (counts[j] / (p * p)) * grad * grad.transpose();
        s.score.noalias() += (counts[j] / p) * grad;
    }
    s.fisher = (s.fisher + s.fisher.transpose()).eval() / 2.0;

    Eigen::SelfAdjointEigenSolver<Matrix> feig(s.fisher);
    const Vector fev = feig.eigenvalues();
    Matrix fisher_for_inverse = s.fisher;
    if (fev.minCoeff() <= 1e-12 * std::max(fev.maxCoeff(), 0.0)) {
        fisher_for_inverse += (1e-10 * s.fisher.trace() / d) * Matrix::Identity(d, d);
        s.regularized = true;
    }
    s.fisher_inverse = fisher_for_inverse.llt().solve(Matrix::Identity(d, d));
    s.fisher_inverse = (s.fisher_inverse + s.fisher_inverse.transpose()).eval() / 2.0;

    Eigen::SelfAdjointEigenSolver<CMatrix> reig(s.rho_ml);
    s.eigenvalues = reig.eigenvalues().reverse();
    s.eigenvectors = reig.eigenvectors().rowwise().reverse();
    const double top = s.eigenvalues[0];
    s.rank = 0;
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
        if (s.eigenvalues[k] > kRankTolerance * top) {
            ++s.rank;
        }
    }
    const CMatrix support = s.eigenvectors.leftCols(s.rank);
    s.support_projector = support * support.adjoint();
    s.case_label = s.rank == dim ? CaseLabel::A : CaseLabel::B;

    if (s.case_label == CaseLabel::A) {
        const double diameter = 2.0 * std::sqrt((dim - 1.0) / dim);
        s.score_consistent = s.score.norm() <= 1e-6 * s.fisher.norm() * diameter;
        s.r_c = s.r_ml;
        s.score_quadratic = 0.0;
    } else {
        s.score_consistent = true;
        s.r_c = s.r_ml + s.fisher_inverse * s.score;
        s.score_quadratic = std::max(0.0, s.score.dot(s.fisher_inverse * s.score));
    }
    s.log_l_prime_max = s.log_l_max + s.score_quadratic / 2.0;
    return s;
}

MlSummary likelihood_summary(const Dataset &data, const Pom &pom, const OperatorBasis &basis,
                             const DensityMatrix &rho_ml) {
    return likelihood_summary(data.as_vector(), pom, basis, rho_ml.matrix());
}

double RegionSpec::ellipsoid_value(const BlochVector &x) const {
    const Vector delta = x - center;
    return delta.dot(shape * delta);
}

RegionSpec region_spec(const MlSummary &summary, double lambda) {
    require(lambda > 0.0 && lambda <= 1.0, ErrorCode::invalid_argument,
            "lambda must lie in (0, 1], got " + std::to_string(lambda));
    RegionSpec region;
    region.lambda = lambda;
    region.case_label = summary.case_label;
    const double log_lambda = std::log(lambda);
    const double q = summary.case_label == CaseLabel::A ? 0.0 : summary.score_quadratic;
    region.log_lambda_prime = log_lambda - q / 2.0;
    region.lambda_prime = std::exp(region.log_lambda_prime);
    region.degenerate = lambda == 1.0;

    if (summary.case_label == CaseLabel::A) {
        region.center = summary.r_ml;
        region.cap_l = 0.0;
    } else {
        region.center = summary.r_c;
        const double norm = summary.score.norm();
        region.normal = norm > 0.0 ? Vector(summary.score / norm) : Vector::Zero(summary.score.size());
        region.cap_l = region.log_lambda_prime < 0.0 ? std::sqrt(q / (-2.0 * region.log_lambda_prime)) : 1.0;
    }
    if (region.log_lambda_prime < 0.0) {
        region.shape = summary.fisher / (-2.0 * region.log_lambda_prime);
    }
    return region;
}

} // namespace credreg
