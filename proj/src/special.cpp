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

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "credreg/analytic.hpp"
#include "credreg/error.hpp"

namespace credreg {

double regularized_incomplete_beta(double x, double a, double b) {
    require(x >= 0.0 && x <= 1.0, ErrorCode::invalid_argument,
            "incomplete beta argument must lie in [0, 1], got " + std::to_string(x));
    require(a > 0.0 && b > 0.0, ErrorCode::invalid_argument, "incomplete beta parameters must be positive");
    return boost::math::ibeta(a, b, x);
}

double lower_incomplete_gamma(double a, double x) {
    require(a > 0.0 && x >= 0.0, ErrorCode::invalid_argument, "incomplete gamma needs a > 0 and x >= 0");
    return boost::math::tgamma_lower(a, x);
}

double regularized_lower_gamma(double a, double x) {
    require(a > 0.0 && x >= 0.0, ErrorCode::invalid_argument, "incomplete gamma needs a > 0 and x >= 0");
    return boost::math::gamma_p(a, x);
}

double unit_ball_volume(int d) {
    require(d >= 0, ErrorCode::invalid_argument, "ball dimension must be nonnegative");
    const double half = 0.5 * d;
    return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

} // namespace credreg
