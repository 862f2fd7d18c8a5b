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

#include "credreg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include <Eigen/Eigenvalues>

#include "credreg/error.hpp"
#include "credreg/projected_gradient.hpp"

namespace credreg {

namespace {

constexpr double kMembershipSlack = 1e-9;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p); }

} // namespace

Prior Prior::uniform() { return Prior{}; }

Prior Prior::gaussian(BlochVector center, Matrix precision) {
    require(precision.rows() == precision.cols() && precision.rows() == center.size(),
            ErrorCode::dimension_mismatch, "prior precision and center sizes differ");
    require((precision - precision.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, precision.norm()),
            ErrorCode::contract_violation, "prior precision is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(precision, Eigen::EigenvaluesOnly);
    require(eig.eigenvalues().minCoeff() >= -1e-10 * std::max(1.0, eig.eigenvalues().maxCoeff()),
            ErrorCode::contract_violation, "prior precision is not positive semidefinite");
    Prior prior;
    prior.kind = Kind::gaussian;
    prior.center = std::move(center);
    prior.precision = (precision + precision.transpose()) / 2.0;
    return prior;
}

LineMarginal line_gaussian_marginal(const Prior &prior, const BlochVector &ref, const Vector &direction) {
    require(prior.kind == Prior::Kind::gaussian, ErrorCode::invalid_argument,
            "line marginal requires a Gaussian prior");
    require(ref.size() == prior.center.size() && direction.size() == prior.center.size(),
            ErrorCode::dimension_mismatch, "line marginal vector sizes differ");
    const Vector pe = prior.precision * direction;
    const double epe = direction.dot(pe);
    require(epe > 0.0, ErrorCode::degenerate_direction, "prior precision vanishes along the chord direction");
    return LineMarginal{pe.dot(prior.center - ref) / epe, 1.0 / epe};
}

double truncated_standard_normal(double lo, double hi, Rng &rng) {
    require(lo <= hi, ErrorCode::invalid_argument, "truncation interval is empty");
    if (lo == hi) {
        return lo;
    }
    // work in the lower tail where the CDF keeps relative precision
    const bool flip = lo > 0.0;
    const double a = flip ? -hi : lo;
    const double b = flip ? -lo : hi;
    const double pa = normal_cdf(a);
    const double pb = normal_cdf(b);
    const double u = uniform01(rng);
    double z;
    if (pb - pa > 1e-300 && pb > pa) {
        const double p = std::clamp(pa + u * (pb - pa), std::numeric_limits<double>::min(), 1.0);
        z = p >= 1.0 ? b : normal_quantile(p);
        z = std::clamp(z, a, b);
    } else {
        z = a + u * (b - a);
    }
    return flip ? -z : z;
}

HitAndRun::HitAndRun(const RegionSpec &region, const Prior &prior, const OperatorBasis &basis,
                     const SamplerConfig &config, std::optional<LikelihoodCut> cut)
    : center_(region.center), prior_(prior), basis_(&basis), config_(config), cut_(cut),
      psd_(basis.dimension()) {
    require(!region.degenerate && region.shape.size() > 0, ErrorCode::sampler_precondition,
            "cannot sample a degenerate single-point region");
    require(region.shape.rows() == basis.size(), ErrorCode::dimension_mismatch,
            "region and basis dimensions differ");
    require(config.inflation >= 1.0 && config.inflation <= 2.0, ErrorCode::invalid_argument,
            "safety inflation must lie in [1, 2]");
    require(config.thinning >= 1 && config.burn_in >= 0, ErrorCode::invalid_argument,
            "thinning must be positive and burn-in nonnegative");
    require(config.inflation == 1.0 || cut.has_value(), ErrorCode::invalid_argument,
            "an inflated bounding body needs the exact likelihood cut");
    if (prior.kind == Prior::Kind::gaussian) {
        require(prior.center.size() == basis.size(), ErrorCode::dimension_mismatch,
                "prior and basis dimensions differ");
    }
    shape_ = region.shape / (config.inflation * config.inflation);
    const auto d = basis.size();
    direction_.resize(d);
    delta_.resize(d);
    shape_direction_.resize(d);
    shape_delta_.resize(d);
    trial_.resize(d);
    work_.resize(basis.dimension(), basis.dimension());
}

bool HitAndRun::accept(const BlochVector &x) {
    basis_->assemble(x, work_);
    if (!psd_(work_)) {
        return false;
    }
    if (cut_) {
        return (*cut_->log_likelihood)(x) >= cut_->threshold;
    }
    return true;
}

bool HitAndRun::contains(const BlochVector &x) {
    delta_ = x - center_;
    const double value = delta_.dot(shape_ * delta_);
    return value <= 1.0 + kMembershipSlack && accept(x);
}

double HitAndRun::draw_beta(double lo, double hi, const BlochVector &current, const Vector &direction,
                            Rng &rng) const {
    if (prior_.kind == Prior::Kind::uniform) {
        return lo + uniform01(rng) * (hi - lo);
    }
    const LineMarginal line = line_gaussian_marginal(prior_, current, direction);
    const double sd = std::sqrt(line.variance);
    const double z = truncated_standard_normal((lo - line.mean) / sd, (hi - line.mean) / sd, rng);
    return std::clamp(line.mean + sd * z, lo, hi);
}

void HitAndRun::advance(ChainState &state, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    int restarts = 0;
    while (true) {
        double norm = 0.0;
        while (norm == 0.0) {
            for (Eigen::Index k = 0; k < direction_.size(); ++k) {
                direction_[k] = normal(rng);
            }
            norm = direction_.norm();
        }
        direction_ /= norm;

        delta_ = state.current - center_;
        shape_direction_.noalias() = shape_ * direction_;
        const double a = direction_.dot(shape_direction_);
        const double b = delta_.dot(shape_direction_);
        shape_delta_.noalias() = shape_ * delta_;
        const double c = delta_.dot(shape_delta_);
        require(a > 0.0, ErrorCode::degenerate_direction, "bounding ellipsoid is flat along a chord direction");
        const double disc = std::max(0.0, b * b - a * (c - 1.0));
        const double root = std::sqrt(disc);
        double lo = std::min((-b - root) / a, 0.0);
        double hi = std::max((-b + root) / a, 0.0);

        for (int shrink = 0; shrink < config_.max_shrinks; ++shrink) {
            const double beta = draw_beta(lo, hi, state.current, direction_, rng);
            trial_ = state.current + beta * direction_;
            if (accept(trial_)) {
                state.current = trial_;
                ++state.steps_taken;
                return;
            }
            ++state.rejections;
            if (beta < 0.0) {
                lo = beta;
            } else {
                hi = beta;
            }
        }
        ++state.restarts;
        if (++restarts >= config_.max_restarts) {
            fail(ErrorCode::chord_stuck, "hit-and-run chord stuck after " + std::to_string(restarts) +
                                             " restarts of " + std::to_string(config_.max_shrinks) +
                                             " shrink steps");
        }
    }
}

SampleBatch hit_and_run_sample(const RegionSpec &region, const Prior &prior, const OperatorBasis &basis,
                               const LogLikelihood &log_likelihood, const BlochVector &start, int samples,
                               Rng &rng, const SamplerConfig &config, std::optional<LikelihoodCut> cut) {
    require(samples >= 1, ErrorCode::invalid_argument, "sample count must be positive");
    HitAndRun chain(region, prior, basis, config, cut);
    require(start.size() == basis.size(), ErrorCode::dimension_mismatch, "start point has the wrong length");
    require(chain.contains(start), ErrorCode::sampler_precondition, "start point lies outside the region");

    ChainState state;
    state.current = start;
    for (int k = 0; k < config.burn_in; ++k) {
        chain.advance(state, rng);
    }
    SampleBatch batch;
    batch.start = start;
    batch.points.resize(samples, basis.size());
    batch.log_likelihoods.resize(samples);
    for (int k = 0; k < samples; ++k) {
        for (int t = 0; t < config.thinning; ++t) {
            chain.advance(state, rng);
        }
        batch.points.row(k) = state.current.transpose();
        batch.log_likelihoods[k] = log_likelihood(state.current);
    }
    batch.rejections = state.rejections;
    batch.restarts = state.restarts;
    return batch;
}

SampleBatch sample_region(const RegionSpec &region, const Prior &prior, const MlSummary &summary,
                          const OperatorBasis &basis, const LogLikelihood &log_likelihood, int samples, Rng &rng,
                          const SamplerConfig &config) {
    const BlochVector start = region.case_label == CaseLabel::A
                                  ? region.center
                                  : find_interior_point(region, summary, basis, 2 * basis.dimension(), rng);
    std::optional<LikelihoodCut> cut;
    if (config.inflation > 1.0) {
        cut = LikelihoodCut{&log_likelihood, std::log(region.lambda) + summary.log_l_max};
    }
    return hit_and_run_sample(region, prior, basis, log_likelihood, start, samples, rng, config, cut);
}

double boundary_residual(const RegionSpec &region, const BlochVector &x) {
    const double q = region.ellipsoid_value(x) - 1.0;
    return q * q;
}

BlochVector find_interior_point(const RegionSpec &region, const MlSummary &summary, const OperatorBasis &basis,
                                int n_boundary, Rng &rng) {
    if (region.case_label == CaseLabel::A) {
        return region.center;
    }
    require(n_boundary >= 1, ErrorCode::invalid_argument, "need at least one boundary search");
    require(!region.degenerate && region.shape.size() > 0, ErrorCode::sampler_precondition,
            "cannot search a degenerate region");
    const int dim = basis.dimension();
    const Matrix &shape = region.shape;
    const BlochVector &center = region.center;

    StateObjective objective = [&](const CMatrix &rho, CMatrix *gradient) {
        const Vector x = basis.coordinates(rho);
        const Vector delta = x - center;
        const Vector ad = shape * delta;
        const double q = delta.dot(ad) - 1.0;
        if (gradient != nullptr) {
            const Vector w = 4.0 * q * ad;
            basis.assemble(w, *gradient);
            gradient->diagonal().array() -= 1.0 / dim;
        }
        return q * q;
    };

    ApgOptions options;
    options.max_iters = 5000;
    options.tolerance = 0.0;
    options.target_value = 1e-14;

    Vector sum = Vector::Zero(basis.size());
    int found = 0;
    for (int i = 0; i < n_boundary; ++i) {
        const DensityMatrix start = random_density(dim, dim, rng);
        const ApgResult result = minimize_over_states(objective, start.matrix(), options);
        if (result.value < 1e-10) {
            sum += basis.coordinates(result.rho);
            ++found;
        }
    }
    require(found > 0, ErrorCode::no_boundary_points,
            "no boundary state reached residual 1e-10 in " + std::to_string(n_boundary) + " searches");
    BlochVector point = sum / found;

    const double eps_rank = kRankTolerance * summary.eigenvalues[0];
    auto strictly_inside = [&](const BlochVector &x) {
        if (region.ellipsoid_value(x) >= 1.0 - 1e-6) {
            return false;
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(r_to_rho(x, basis), Eigen::EigenvaluesOnly);
        return eig.eigenvalues().minCoeff() > eps_rank / 10.0;
    };
    if (strictly_inside(point)) {
        return point;
    }
    const BlochVector blended = (point + summary.r_ml) / 2.0;
    if (strictly_inside(blended)) {
        return blended;
    }
    const bool in_ellipsoid = region.ellipsoid_value(point) <= 1.0 + kMembershipSlack;
    require(in_ellipsoid && is_positive_state(r_to_rho(point, basis)), ErrorCode::no_boundary_points,
            "averaged boundary states do not form an interior point");
    return point;
}

std::vector<double> hopping_profile(const SampleBatch &batch) {
    std::vector<double> hops;
    if (batch.points.rows() < 2) {
        return hops;
    }
    hops.reserve(static_cast<std::size_t>(batch.points.rows() - 1));
    for (Eigen::Index k = 1; k < batch.points.rows(); ++k) {
        hops.push_back((batch.points.row(k) - batch.points.row(k - 1)).norm());
    }
    return hops;
}

double mixing_step_estimate(const MlSummary &summary, ComplexityCase case_type) {
    const double dim = summary.dimension;
    if (case_type == ComplexityCase::B_I) {
        return std::pow(dim, 9);
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(summary.fisher, Eigen::EigenvaluesOnly);
    const double smallest = eig.eigenvalues().minCoeff();
    const double largest = eig.eigenvalues().maxCoeff();
    require(smallest > 1e-12 * std::max(largest, 0.0) && largest > 0.0, ErrorCode::ill_conditioned,
            "Fisher matrix is singular");
    return std::pow(dim, 7) * (largest / smallest);
}

} // namespace credreg
