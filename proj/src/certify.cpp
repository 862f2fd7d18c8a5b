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

#include "credreg/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "credreg/error.hpp"

namespace credreg {

const char *grid_spacing_name(GridSpacing spacing) noexcept {
    switch (spacing) {
    case GridSpacing::log:
        return "log";
    case GridSpacing::linear:
        return "linear";
    case GridSpacing::hybrid:
        return "hybrid";
    }
    return "unknown";
}

const char *ode_scheme_name(OdeScheme scheme) noexcept {
    return scheme == OdeScheme::forward_euler ? "forward" : "trapezoid";
}

LambdaGrid LambdaGrid::make(GridSpacing spacing, int points, double lambda_min) {
    require(points >= 0, ErrorCode::invalid_argument, "grid size must be nonnegative");
    require(lambda_min >= 1e-300 && lambda_min < 1.0, ErrorCode::invalid_argument,
            "grid minimum must lie in [1e-300, 1)");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        values.push_back(lambda_min);
    } else if (points >= 2) {
        const double n = points - 1;
        switch (spacing) {
        case GridSpacing::log: {
            const double lo = std::log(lambda_min);
            for (int j = 0; j < points; ++j) {
                values.push_back(std::exp(lo * (1.0 - j / n)));
            }
            break;
        }
        case GridSpacing::linear:
            for (int j = 0; j < points; ++j) {
                values.push_back(lambda_min + (1.0 - lambda_min) * (j / n));
            }
            break;
        case GridSpacing::hybrid: {
            const double x_max = -std::log(lambda_min);
            const double x_min = std::min(1e-3, x_max / 2.0);
            const double interior = points - 1;
            for (int j = 0; j < points - 1; ++j) {
                const double t = interior > 1 ? j / (interior - 1.0) : 0.0;
                const double x = std::exp(std::log(x_max) * (1.0 - t) + std::log(x_min) * t);
                values.push_back(std::exp(-x));
            }
            values.push_back(1.0);
            break;
        }
        }
        values.back() = 1.0;
    }
    return from_values(std::move(values), spacing);
}

LambdaGrid LambdaGrid::from_values(std::vector<double> values, GridSpacing spacing) {
    for (std::size_t j = 0; j < values.size(); ++j) {
        require(std::isfinite(values[j]) && values[j] >= 1e-300 && values[j] <= 1.0, ErrorCode::invalid_argument,
                "grid value " + std::to_string(j) + " lies outside [1e-300, 1]");
        require(j == 0 || values[j] > values[j - 1], ErrorCode::invalid_argument,
                "grid values must be strictly increasing at index " + std::to_string(j));
    }
    LambdaGrid grid;
    grid.values_ = std::move(values);
    grid.spacing_ = spacing;
    return grid;
}

double default_lambda_min(int d) {
    require(d >= 1, ErrorCode::invalid_argument, "parameter count must be positive");
    const double k = d / 2.0 + 1.0;
    const double needed = k + 6.0 * std::sqrt(k);
    return std::exp(-std::max(std::log(1e10), needed));
}

double batch_means_stderr(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::size_t batches = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    if (batches < 2) {
        batches = n;
    }
    const std::size_t size = n / batches;
    const std::size_t offset = n - batches * size;
    std::vector<double> means(batches, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
            acc += values[offset + b * size + i];
        }
        means[b] = acc / static_cast<double>(size);
    }
    double mean = 0.0;
    for (double m : means) {
        mean += m;
    }
    mean /= static_cast<double>(batches);
    double var = 0.0;
    for (double m : means) {
        var += (m - mean) * (m - mean);
    }
    var /= static_cast<double>(batches - 1);
    return std::sqrt(var / static_cast<double>(batches));
}

UEstimate u_from_batch(const SampleBatch &batch, double lambda, double log_l_max) {
    require(lambda > 0.0 && lambda <= 1.0, ErrorCode::invalid_argument, "lambda must lie in (0, 1]");
    const auto n = batch.log_likelihoods.size();
    require(n >= 1, ErrorCode::invalid_argument, "empty sample batch");
    const double cut = std::log(lambda) + log_l_max;
    std::vector<double> q(static_cast<std::size_t>(n));
    UEstimate est{0.0, 0.0, 0, static_cast<std::int64_t>(n)};
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double value = batch.log_likelihoods[i] - cut;
        if (value < 0.0) {
            value = 0.0;
            ++est.clipped;
        }
        q[static_cast<std::size_t>(i)] = value;
        total += value;
    }
    est.u = total / static_cast<double>(n);
    est.stderr = batch_means_stderr(q);
    return est;
}

UEstimate estimate_u(const RegionSpec &region, const Prior &prior, const MlSummary &summary,
                     const OperatorBasis &basis, const LogLikelihood &log_likelihood, int samples, Rng &rng,
                     const SamplerConfig &config) {
    require(samples >= 100, ErrorCode::invalid_argument, "region averages need at least 100 samples");
    if (region.degenerate) {
        return UEstimate{0.0, 0.0, 0, 0};
    }
    const SampleBatch batch = sample_region(region, prior, summary, basis, log_likelihood, samples, rng, config);
    return u_from_batch(batch, region.lambda, summary.log_l_max);
}

std::vector<double> euler_size_spectrum(std::span<const double> u, const LambdaGrid &grid, OdeScheme scheme) {
    require(u.size() == grid.size(), ErrorCode::dimension_mismatch, "u values and grid differ in length");
    const std::size_t n = u.size();
    std::vector<double> S(n, 0.0);
    if (n == 0) {
        return S;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const bool last = j + 1 == n;
        const bool ok = std::isfinite(u[j]) && (u[j] > 0.0 || (last && u[j] == 0.0));
        require(ok, ErrorCode::ill_conditioned,
                "region average must be positive before the final grid point; index " + std::to_string(j) +
                    " has u = " + std::to_string(u[j]));
    }
    double y = u[0];
    S[0] = 1.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double lam = grid[j];
        const double next = grid[j + 1];
        if (u[j + 1] == 0.0) {
            S[j + 1] = 0.0;
            y = 0.0;
            continue;
        }
        if (scheme == OdeScheme::forward_euler) {
            y -= (y / u[j]) * ((next - lam) / lam);
        } else {
            const double h = std::log(next / lam);
            y *= (1.0 - h / (2.0 * u[j])) / (1.0 + h / (2.0 * u[j + 1]));
        }
        y = std::max(y, 0.0);
        S[j + 1] = y / u[j + 1];
    }
    return S;
}

double size_integral(std::span<const double> S, const LambdaGrid &grid) {
    require(S.size() == grid.size(), ErrorCode::dimension_mismatch, "S values and grid differ in length");
    if (S.empty()) {
        return 0.0;
    }
    double total = grid[0] * S[0];
    for (std::size_t j = 0; j + 1 < S.size(); ++j) {
        total += 0.5 * (S[j] + S[j + 1]) * (grid[j + 1] - grid[j]);
    }
    const double last = grid[S.size() - 1];
    if (last < 1.0) {
        total += 0.5 * S.back() * (1.0 - last);
    }
    return total;
}

std::vector<double> credibility_spectrum(std::span<const double> S, const LambdaGrid &grid) {
    require(S.size() == grid.size(), ErrorCode::dimension_mismatch, "S values and grid differ in length");
    for (double s : S) {
        require(std::isfinite(s) && s >= 0.0, ErrorCode::invalid_argument, "size values must be finite and >= 0");
    }
    const std::size_t n = S.size();
    std::vector<double> C(n, 0.0);
    if (n == 0) {
        return C;
    }
    const double denominator = size_integral(S, grid);
    require(denominator > 0.0, ErrorCode::ill_conditioned, "size spectrum integrates to zero");
    // tail[j] = integral of S from grid[j] to 1
    std::vector<double> tail(n, 0.0);
    tail[n - 1] = grid[n - 1] < 1.0 ? 0.5 * S[n - 1] * (1.0 - grid[n - 1]) : 0.0;
    for (std::size_t j = n - 1; j-- > 0;) {
        tail[j] = tail[j + 1] + 0.5 * (S[j] + S[j + 1]) * (grid[j + 1] - grid[j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        C[j] = (grid[j] * S[j] + tail[j]) / denominator;
    }
    C[0] = 1.0;
    return C;
}

double lambda_crit(std::span<const double> S, const LambdaGrid &grid) { return size_integral(S, grid); }

BaselineResult mc_filter_baseline(const MlSummary &summary, const Pom &pom, const Vector &counts,
                                  const OperatorBasis &basis, const LambdaGrid &grid, std::int64_t samples,
                                  Rng &rng) {
    const int dim = basis.dimension();
    require(dim <= 3, ErrorCode::invalid_argument, "state-space filtering is limited to D <= 3");
    require(samples >= 1, ErrorCode::invalid_argument, "sample count must be positive");
    const LogLikelihood log_l(counts, pom);
    const int d = basis.size();
    const double radius = std::sqrt((dim - 1.0) / dim);
    const std::size_t n = grid.size();
    std::vector<double> log_grid(n);
    for (std::size_t j = 0; j < n; ++j) {
        log_grid[j] = std::log(grid[j]);
    }

    BaselineResult result;
    result.yield.assign(n, 0);
    std::vector<double> weight_in(n, 0.0);
    double weight_total = 0.0;
    PositivityTest psd(dim);
    CMatrix work(dim, dim);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector x(d);
    while (result.accepted < samples) {
        ++result.proposals;
        for (int k = 0; k < d; ++k) {
            x[k] = normal(rng);
        }
        const double norm = x.norm();
        if (norm == 0.0) {
            continue;
        }
        x *= radius * std::pow(uniform01(rng), 1.0 / d) / norm;
        basis.assemble(x, work);
        if (!psd(work)) {
            continue;
        }
        ++result.accepted;
        const double rel = log_l(x) - summary.log_l_max;
        if (!std::isfinite(rel)) {
            continue;
        }
        const double w = std::exp(rel);
        weight_total += w;
        // log grid sorted ascending: inside R_lambda iff rel > ln lambda
        const auto inside = static_cast<std::size_t>(std::lower_bound(log_grid.begin(), log_grid.end(), rel) -
                                                     log_grid.begin());
        for (std::size_t j = 0; j < inside; ++j) {
            ++result.yield[j];
            weight_in[j] += w;
        }
    }
    result.S.resize(n);
    result.C.resize(n);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < n; ++j) {
        if (result.yield[j] == 0) {
            result.S[j] = nan;
            result.C[j] = nan;
            continue;
        }
        result.S[j] = static_cast<double>(result.yield[j]) / static_cast<double>(result.accepted);
        result.C[j] = weight_total > 0.0 ? weight_in[j] / weight_total : nan;
    }
    return result;
}

} // namespace credreg
