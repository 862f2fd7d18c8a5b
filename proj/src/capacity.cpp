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

#include "credreg/capacity.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "credreg/error.hpp"

namespace credreg {

namespace {

void check_state(const CMatrix &rho, const char *name) {
    require(rho.rows() == rho.cols(), ErrorCode::dimension_mismatch, std::string(name) + " must be square");
    require((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= 1e-10, ErrorCode::contract_violation,
            std::string(name) + " is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho, Eigen::EigenvaluesOnly);
    require(eig.eigenvalues().minCoeff() >= -1e-10, ErrorCode::contract_violation,
            std::string(name) + " is not positive semidefinite");
    require(std::abs(rho.trace().real() - 1.0) <= 1e-10, ErrorCode::contract_violation,
            std::string(name) + " does not have unit trace");
}

double root_fidelity_with_sqrt(const CMatrix &sqrt_a, const CMatrix &rho_b) {
    const CMatrix inner = sqrt_a * rho_b * sqrt_a;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig((inner + inner.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

double trace_norm_difference(const CMatrix &a, const CMatrix &b) {
    const CMatrix diff = a - b;
    Eigen::SelfAdjointEigenSolver<CMatrix> eig((diff + diff.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().sum();
}

} // namespace

const char *distance_measure_name(DistanceMeasure measure) noexcept {
    switch (measure) {
    case DistanceMeasure::hilbert_schmidt:
        return "hilbert-schmidt";
    case DistanceMeasure::trace:
        return "trace";
    case DistanceMeasure::bures:
        return "bures";
    }
    return "unknown";
}

double fidelity(const CMatrix &rho_a, const CMatrix &rho_b) {
    check_state(rho_a, "first state");
    check_state(rho_b, "second state");
    require(rho_a.rows() == rho_b.rows(), ErrorCode::dimension_mismatch, "states differ in dimension");
    const double root = root_fidelity_with_sqrt(psd_sqrt(rho_a), rho_b);
    return root * root;
}

double state_distance(const CMatrix &rho_a, const CMatrix &rho_b, DistanceMeasure measure) {
    check_state(rho_a, "first state");
    check_state(rho_b, "second state");
    require(rho_a.rows() == rho_b.rows(), ErrorCode::dimension_mismatch, "states differ in dimension");
    switch (measure) {
    case DistanceMeasure::hilbert_schmidt:
        return (rho_a - rho_b).squaredNorm();
    case DistanceMeasure::trace:
        return trace_norm_difference(rho_a, rho_b);
    case DistanceMeasure::bures: {
        const double root = root_fidelity_with_sqrt(psd_sqrt(rho_a), rho_b);
        return std::max(0.0, 2.0 * (1.0 - root));
    }
    }
    fail(ErrorCode::invalid_argument, "unknown distance measure");
}

ReferenceDistance::ReferenceDistance(const CMatrix &reference)
    : reference_(reference), sqrt_reference_(psd_sqrt(reference)) {
    check_state(reference, "reference state");
}

double ReferenceDistance::fidelity(const CMatrix &rho) const {
    const double root = root_fidelity_with_sqrt(sqrt_reference_, rho);
    return root * root;
}

double ReferenceDistance::operator()(const CMatrix &rho, DistanceMeasure measure) const {
    switch (measure) {
    case DistanceMeasure::hilbert_schmidt:
        return (reference_ - rho).squaredNorm();
    case DistanceMeasure::trace:
        return trace_norm_difference(reference_, rho);
    case DistanceMeasure::bures:
        return std::max(0.0, 2.0 * (1.0 - root_fidelity_with_sqrt(sqrt_reference_, rho)));
    }
    fail(ErrorCode::invalid_argument, "unknown distance measure");
}

CapacityEstimate capacity_from_batch(const SampleBatch &batch, const CMatrix &reference,
                                     const OperatorBasis &basis, DistanceMeasure measure) {
    require(batch.points.rows() >= 1, ErrorCode::invalid_argument, "empty sample batch");
    const ReferenceDistance distance(reference);
    std::vector<double> values(static_cast<std::size_t>(batch.points.rows()));
    CMatrix rho;
    double total = 0.0;
    for (Eigen::Index k = 0; k < batch.points.rows(); ++k) {
        basis.assemble(batch.points.row(k).transpose(), rho);
        const double v = distance(rho, measure);
        values[static_cast<std::size_t>(k)] = v;
        total += v;
    }
    return CapacityEstimate{total / static_cast<double>(values.size()), batch_means_stderr(values)};
}

CapacitySpectrum capacity_spectrum(const MlSummary &summary, const LambdaGrid &grid, const Prior &prior,
                                   DistanceMeasure measure, const OperatorBasis &basis,
                                   const LogLikelihood &log_likelihood, int samples, Rng &rng,
                                   const SamplerConfig &config) {
    require(samples >= 100, ErrorCode::invalid_argument, "region averages need at least 100 samples");
    CapacitySpectrum spectrum;
    spectrum.grid = grid;
    spectrum.measure = measure;
    spectrum.mean.resize(grid.size());
    spectrum.stderr.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const RegionSpec region = region_spec(summary, grid[j]);
        if (region.degenerate) {
            spectrum.mean[j] = 0.0;
            spectrum.stderr[j] = 0.0;
            continue;
        }
        const SampleBatch batch =
            sample_region(region, prior, summary, basis, log_likelihood, samples, rng, config);
        const CapacityEstimate est = capacity_from_batch(batch, summary.rho_ml, basis, measure);
        spectrum.mean[j] = est.mean;
        spectrum.stderr[j] = est.stderr;
    }
    return spectrum;
}

double tr_hs_asymptotic(double S_hs, int dimension) {
    require(S_hs >= 0.0, ErrorCode::invalid_argument, "S_hs must be nonnegative");
    require(dimension >= 1, ErrorCode::invalid_dimension, "dimension must be positive");
    return 8.0 * std::sqrt(dimension * S_hs) / (3.0 * std::numbers::pi);
}

} // namespace credreg
