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

#include "credreg/analytic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "credreg/capacity.hpp"
#include "credreg/error.hpp"

namespace credreg {

namespace {

void check_cap_domain(int d, double l) {
    require(d >= 1, ErrorCode::invalid_argument, "cap dimension must be at least 1");
    require(l >= 0.0 && l <= 1.0, ErrorCode::invalid_argument,
            "cap parameter must lie in [0, 1], got " + std::to_string(l));
}

/// -V_{d-1} (1 - l^2)^{(d+1)/2} / (d + 1)
double first_moment_coefficient(int d, double l) {
    const double s = std::max(0.0, 1.0 - l * l);
    const double half = 0.5 * (d + 3);
    return -std::exp(0.5 * (d - 1) * std::log(std::numbers::pi) - std::lgamma(half)) *
           std::pow(s, 0.5 * (d + 1)) / 2.0;
}

} // namespace

double cap_normalization(int d, double l, int x) {
    check_cap_domain(d, l);
    const double a = 0.5 * (d + x);
    return unit_ball_volume(d) * regularized_incomplete_beta((1.0 - l) / 2.0, a, a);
}

CapMoments cap_moments(int d, double l) {
    check_cap_domain(d, l);
    CapMoments cm{};
    cm.d = d;
    cm.l = l;
    cm.I0 = cap_normalization(d, l, 1);
    cm.I1_coefficient = first_moment_coefficient(d, l);
    cm.I2_iso = cap_normalization(d, l, 3) / (d + 2);
    cm.I2_aniso = -cm.I1_coefficient * l;
    return cm;
}

AuxQuantities aux_quantities(const MlSummary &summary, const RegionSpec &region) {
    const int d = static_cast<int>(summary.fisher.rows());
    require(region.center.size() == d, ErrorCode::dimension_mismatch, "region and summary dimensions differ");
    const double neg_log_lp = -region.log_lambda_prime;
    AuxQuantities aux;
    const bool score_free = summary.case_label == CaseLabel::A || summary.score.norm() == 0.0;
    if (score_free) {
        // full ellipsoid
        aux.script_n1 = unit_ball_volume(d);
        aux.script_n3 = aux.script_n1;
        aux.m = Vector::Zero(d);
        aux.M = (neg_log_lp / (d + 2)) * aux.script_n3 * summary.fisher_inverse;
        return aux;
    }
    const double l = region.cap_l;
    require(l > 0.0, ErrorCode::inconsistent_region, "cap parameter vanishes while the score is nonzero");
    const Vector fg = summary.fisher_inverse * summary.score;
    aux.script_n1 = cap_normalization(d, l, 1);
    aux.script_n3 = cap_normalization(d, l, 3);
    aux.m = (first_moment_coefficient(d, l) / l + aux.script_n1) * fg;
    aux.M = (neg_log_lp / (d + 2)) * aux.script_n3 * summary.fisher_inverse + 0.5 * aux.m * fg.transpose();
    return aux;
}

FidelityDyadics fidelity_dyadics(const MlSummary &summary, const OperatorBasis &basis) {
    require(summary.rank >= 1, ErrorCode::ill_conditioned, "estimator has no eigenvalue above the rank threshold");
    const int r = summary.rank;
    const int d = basis.size();
    const CMatrix support = summary.eigenvectors.leftCols(r);
    const Vector lam = summary.eigenvalues.head(r);

    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(d));
    FidelityDyadics dy;
    dy.first_order.resize(d);
    for (int a = 0; a < d; ++a) {
        blocks.push_back(support.adjoint() * basis[a] * support);
        dy.first_order[a] = blocks.back().trace().real();
    }
    Matrix weights(r, r);
    for (int j = 0; j < r; ++j) {
        for (int k = 0; k < r; ++k) {
            weights(j, k) = 1.0 / (lam[j] + lam[k]);
        }
    }
    dy.Q.resize(d, d);
    double worst_imag = 0.0;
    double scale = 0.0;
    for (int a = 0; a < d; ++a) {
        const CMatrix weighted = blocks[static_cast<std::size_t>(a)].cwiseProduct(weights.cast<Complex>());
        for (int b = a; b < d; ++b) {
            // sum_jk W_a(j,k) W_b(k,j) w_jk with W_b Hermitian
            const Complex value = (weighted.cwiseProduct(blocks[static_cast<std::size_t>(b)].conjugate())).sum();
            dy.Q(a, b) = value.real();
            dy.Q(b, a) = value.real();
            worst_imag = std::max(worst_imag, std::abs(value.imag()));
            scale = std::max(scale, std::abs(value.real()));
        }
    }
    require(worst_imag <= 1e-10 * std::max(1.0, scale), ErrorCode::internal,
            "fidelity dyadic has a non-negligible imaginary part");
    return dy;
}

AnalyticCapacities analytic_case_a(const MlSummary &summary, const FidelityDyadics &dyadics, double lambda) {
    require(summary.case_label == CaseLabel::A, ErrorCode::invalid_argument,
            "Case-A formulas need a full-rank estimator");
    require(lambda > 0.0 && lambda <= 1.0, ErrorCode::invalid_argument, "lambda must lie in (0, 1]");
    const double d = static_cast<double>(summary.fisher.rows());
    const double neg_log = -std::log(lambda);
    AnalyticCapacities out{};
    out.S_hs = summary.fisher_inverse.trace() * neg_log / (d / 2.0 + 1.0);
    out.S_b = (summary.fisher_inverse * dyadics.Q).trace() * neg_log / (d + 2.0);
    out.S_tr = tr_hs_asymptotic(out.S_hs, summary.dimension);
    out.u = 2.0 * neg_log / (d + 2.0);
    return out;
}

AnalyticCapacities analytic_case_b(const MlSummary &summary, const RegionSpec &region,
                                   const FidelityDyadics &dyadics, bool keep_quadratic) {
    require(summary.case_label == CaseLabel::B, ErrorCode::invalid_argument,
            "Case-B formulas need a rank-deficient estimator");
    AnalyticCapacities out{};
    if (region.degenerate || region.cap_l >= 1.0) {
        return out;
    }
    const AuxQuantities aux = aux_quantities(summary, region);
    const double n1 = aux.script_n1;
    out.S_hs = 2.0 * aux.M.trace() / n1;
    double bures = -dyadics.first_order.dot(aux.m);
    if (keep_quadratic) {
        bures += (aux.M * dyadics.Q).trace();
    }
    out.S_b = bures / n1;
    out.S_tr = tr_hs_asymptotic(std::max(out.S_hs, 0.0), summary.dimension);
    const double inner = -region.log_lambda_prime +
                         (summary.score * aux.m.transpose() - summary.fisher * aux.M).trace() / n1;
    const double log_lambda = std::log(region.lambda);
    out.u = inner * (log_lambda + summary.log_l_max) / (region.log_lambda_prime + summary.log_l_max);
    return out;
}

double calibration_density(CalibrationKind kind, double a, double b, double c, double a_prime, double b_prime,
                           double c_prime, double x, double y) {
    require(a > 0.0 && b > 0.0 && c > 0.0, ErrorCode::invalid_argument, "ellipsoid eigenvalues must be positive");
    const double slack = std::max(0.0, 1.0 - a * x * x - b * y * y);
    if (kind == CalibrationKind::uniform) {
        return std::sqrt(slack);
    }
    require(a_prime >= 0.0 && b_prime >= 0.0 && c_prime > 0.0, ErrorCode::invalid_argument,
            "Gaussian eigenvalues must be nonnegative with c' > 0");
    if (slack == 0.0) {
        return 0.0;
    }
    return std::exp(-a_prime * x * x - b_prime * y * y) * lower_incomplete_gamma(0.5, c_prime * slack / c);
}

} // namespace credreg
