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

#include "credreg/states.hpp"
#include "credreg/tomography.hpp"
#include "credreg/types.hpp"

namespace credreg {

/// I_x(a, b).
double regularized_incomplete_beta(double x, double a, double b);

/// Unregularized lower incomplete gamma function.
double lower_incomplete_gamma(double a, double x);

/// P(a, x) = gamma(a, x) / Gamma(a).
double regularized_lower_gamma(double a, double x);

/// Volume of the unit ball in d dimensions.
double unit_ball_volume(int d);

/**
 * Moments of the unit-ball cap {r : |r| <= 1, bhat . r <= -l}:
 * I0 = volume, I1 = I1_coefficient * bhat,
 * I2 = I2_iso * identity + I2_aniso * bhat bhat^T.
 */
struct CapMoments {
    int d;
    double l;
    double I0;
    double I1_coefficient;
    double I2_iso;
    double I2_aniso;
};

CapMoments cap_moments(int d, double l);

/// V_d * I_{(1-l)/2}((d+x)/2, (d+x)/2).
double cap_normalization(int d, double l, int x);

struct AuxQuantities {
    Vector m;
    Matrix M;
    double script_n1;
    double script_n3;
};

AuxQuantities aux_quantities(const MlSummary &summary, const RegionSpec &region);

struct FidelityDyadics {
    Matrix Q;
    Vector first_order;
};

FidelityDyadics fidelity_dyadics(const MlSummary &summary, const OperatorBasis &basis);

struct AnalyticCapacities {
    double S_hs;
    double S_tr;
    double S_b;
    double u;
};

AnalyticCapacities analytic_case_a(const MlSummary &summary, const FidelityDyadics &dyadics, double lambda);

/// `keep_quadratic` retains the Tr(M Q_r) term of the Bures capacity.
AnalyticCapacities analytic_case_b(const MlSummary &summary, const RegionSpec &region,
                                   const FidelityDyadics &dyadics, bool keep_quadratic = true);

enum class CalibrationKind { uniform, gaussian };

/// Unnormalized marginal density in the (x, y) plane of a qubit region.
double calibration_density(CalibrationKind kind, double a, double b, double c, double a_prime, double b_prime,
                           double c_prime, double x, double y);

} // namespace credreg
