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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>

#include "credreg/analytic.hpp"
#include "credreg/capacity.hpp"
#include "credreg/error.hpp"
#include "credreg/pipeline.hpp"

namespace credreg {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

ReportRow empty_row(double lambda) {
    return ReportRow{lambda, kNan, kNan, kNan, kNan, kNan, kNan, kNan,
                     kNan,   kNan, kNan, kNan, kNan, kNan, kNan, kNan};
}

/// Rethrows any library error with the stage name prefixed.
template <typename F> auto run_stage(const char *stage, F &&body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error &e) {
        throw Error(e.code(), std::string("stage '") + stage + "': " + e.what());
    } catch (const std::exception &e) {
        throw Error(ErrorCode::internal, std::string("stage '") + stage + "': " + e.what());
    }
}

class StageClock {
  public:
    StageClock(Report &report, bool enabled, const char *name)
        : report_(report), enabled_(enabled), name_(name), start_(std::chrono::steady_clock::now()) {}
    ~StageClock() {
        if (enabled_) {
            const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
            report_.timings[name_] += elapsed.count();
        }
    }
    StageClock(const StageClock &) = delete;
    StageClock &operator=(const StageClock &) = delete;

  private:
    Report &report_;
    bool enabled_;
    const char *name_;
    std::chrono::steady_clock::time_point start_;
};

LambdaGrid build_grid(const ExperimentConfig &config, int d) {
    const auto colon = config.grid.find(':');
    const std::string kind = config.grid.substr(0, colon);
    const int points = std::stoi(config.grid.substr(colon + 1));
    const GridSpacing spacing =
        kind == "linear" ? GridSpacing::linear : (kind == "hybrid" ? GridSpacing::hybrid : GridSpacing::log);
    const double lambda_min = config.grid_min > 0.0 ? config.grid_min : default_lambda_min(d);
    return LambdaGrid::make(spacing, points, lambda_min);
}

/// Runs body(j) for j in [0, n) on up to `threads` workers; body must not throw.
template <typename F> void parallel_for(std::size_t n, int threads, F &&body) {
    const auto workers = static_cast<std::size_t>(std::max(1, threads));
    if (workers <= 1 || n <= 1) {
        for (std::size_t j = 0; j < n; ++j) {
            body(j);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t count = std::min(workers, n);
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        pool.emplace_back([&] {
            for (std::size_t j = next.fetch_add(1); j < n; j = next.fetch_add(1)) {
                body(j);
            }
        });
    }
    for (auto &worker : pool) {
        worker.join();
    }
}

double chi_square_p_value(double statistic, int dof) {
    if (dof < 1) {
        return kNan;
    }
    return 1.0 - regularized_lower_gamma(0.5 * dof, 0.5 * statistic);
}

struct CalibrationOutcome {
    double p_value;
    double statistic;
    int dof;
};

/**
 * Bins thinned qubit-region samples on a 20 x 20 grid over the projected
 * ellipse and compares with the marginal density by chi-square.
 */
CalibrationOutcome calibration_test(const MlSummary &summary, const OperatorBasis &basis,
                                    const LogLikelihood &log_l, const ExperimentConfig &config, const Prior &prior,
                                    CalibrationKind kind, double kappa, Rng &rng) {
    const RegionSpec region = region_spec(summary, config.calibration_lambda);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(summary.fisher);
    const Matrix axes = eig.eigenvectors();
    const Vector fisher_eigs = eig.eigenvalues();
    const double scale = -2.0 * std::log(config.calibration_lambda);
    const double a = fisher_eigs[0] / scale;
    const double b = fisher_eigs[1] / scale;
    const double c = fisher_eigs[2] / scale;
    const double a_prime = kind == CalibrationKind::gaussian ? 0.5 * kappa * fisher_eigs[0] : 0.0;
    const double b_prime = kind == CalibrationKind::gaussian ? 0.5 * kappa * fisher_eigs[1] : 0.0;
    const double c_prime = kind == CalibrationKind::gaussian ? 0.5 * kappa * fisher_eigs[2] : 1.0;

    SamplerConfig sampler;
    sampler.inflation = 1.0;
    sampler.burn_in = config.burn_in;
    sampler.thinning = config.calibration_thinning;
    const SampleBatch batch =
        hit_and_run_sample(region, prior, basis, log_l, region.center, config.calibration_samples, rng, sampler);

    constexpr int kBins = 20;
    constexpr int kSub = 24;
    const double x_half = 1.0 / std::sqrt(a);
    const double y_half = 1.0 / std::sqrt(b);
    const double dx = 2.0 * x_half / kBins;
    const double dy = 2.0 * y_half / kBins;

    std::vector<double> observed(kBins * kBins, 0.0);
    for (Eigen::Index k = 0; k < batch.points.rows(); ++k) {
        const Vector local = axes.transpose() * (batch.points.row(k).transpose() - summary.r_ml);
        const int ix = std::clamp(static_cast<int>(std::floor((local[0] + x_half) / dx)), 0, kBins - 1);
        const int iy = std::clamp(static_cast<int>(std::floor((local[1] + y_half) / dy)), 0, kBins - 1);
        observed[static_cast<std::size_t>(ix * kBins + iy)] += 1.0;
    }

    std::vector<double> expected(kBins * kBins, 0.0);
    double mass = 0.0;
    for (int ix = 0; ix < kBins; ++ix) {
        for (int iy = 0; iy < kBins; ++iy) {
            double acc = 0.0;
            for (int sx = 0; sx < kSub; ++sx) {
                const double x = -x_half + (ix + (sx + 0.5) / kSub) * dx;
                for (int sy = 0; sy < kSub; ++sy) {
                    const double y = -y_half + (iy + (sy + 0.5) / kSub) * dy;
                    acc += calibration_density(kind, a, b, c, a_prime, b_prime, c_prime, x, y);
                }
            }
            expected[static_cast<std::size_t>(ix * kBins + iy)] = acc;
            mass += acc;
        }
    }
    const double total = static_cast<double>(batch.points.rows());
    double statistic = 0.0;
    int cells = 0;
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) {
        const double e = expected[i] / mass * total;
        if (e < 5.0) {
            pooled_obs += observed[i];
            pooled_exp += e;
            continue;
        }
        statistic += (observed[i] - e) * (observed[i] - e) / e;
        ++cells;
    }
    if (pooled_exp >= 5.0) {
        statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
        ++cells;
    }
    return CalibrationOutcome{chi_square_p_value(statistic, cells - 1), statistic, cells - 1};
}

double mean_of(const std::vector<double> &values) {
    double total = 0.0;
    for (double v : values) {
        total += v;
    }
    return values.empty() ? kNan : total / static_cast<double>(values.size());
}

} // namespace

int pipeline_threads() {
    if (const char *env = std::getenv("CREDREG_THREADS")) {
        const int value = std::atoi(env);
        if (value >= 1) {
            return value;
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

Report run_pipeline(const ExperimentConfig &config) {
    run_stage("validate", [&] { validate_config(config); });

    Report report;
    report.config_text = canonical_config(config);
    report.config_hash = config_hash(config);
    report.seed = config.seed;
    report.out_dir = config.out;
    const bool timed = config.record_timings;

    const int D = config.dimension;
    const int M = config.resolved_outcomes();
    const std::int64_t N = config.resolved_copies();
    const StreamFactory streams(config.seed);
    const OperatorBasis basis = build_basis(D);
    const int d = basis.size();

    report.labels["prior"] = config.prior;
    report.labels["grid"] = config.grid;
    report.labels["scheme"] = config.scheme;
    report.labels["mode"] = mode_string(config.mode);
    report.scalars["D"] = D;
    report.scalars["d"] = d;
    report.scalars["M"] = M;
    report.scalars["copies"] = static_cast<double>(N);

    const DensityMatrix truth = run_stage("state", [&] {
        StageClock clock(report, timed, "state");
        Rng rng = streams.stream(Stage::true_state);
        const DensityMatrix ginibre = random_density(D, config.resolved_rank(), rng);
        const CMatrix mixed = (1.0 - config.state_mix) * ginibre.matrix() +
                              (config.state_mix / D) * CMatrix::Identity(D, D);
        return DensityMatrix(mixed);
    });

    const Pom pom = run_stage("measurement", [&] {
        StageClock clock(report, timed, "measurement");
        Rng rng = streams.stream(Stage::measurement);
        return random_srm_pom(D, M, basis, rng);
    });

    const Dataset data = run_stage("data", [&] {
        StageClock clock(report, timed, "data");
        Rng rng = streams.stream(Stage::data);
        return simulate_counts(born_probabilities(truth, pom), N, rng);
    });
    const Vector counts = data.as_vector();

    const MlEstimate ml = run_stage("ml", [&] {
        StageClock clock(report, timed, "ml");
        return ml_estimate(data, pom, basis, MlConfig{config.ml_max_iters, config.ml_tolerance});
    });
    report.scalars["ml_iterations"] = ml.iterations;
    report.scalars["ml_converged"] = ml.converged ? 1.0 : 0.0;
    if (!ml.converged) {
        report.warnings.push_back("maximum-likelihood iteration did not converge in " +
                                  std::to_string(ml.iterations) + " iterations");
    }

    const MlSummary summary = run_stage("summary", [&] {
        StageClock clock(report, timed, "summary");
        return likelihood_summary(data, pom, basis, ml.rho);
    });
    report.labels["case"] = summary.case_label == CaseLabel::A ? "A" : "B";
    report.scalars["rank"] = summary.rank;
    report.scalars["log_l_max"] = summary.log_l_max;
    report.scalars["log_l_prime_max"] = summary.log_l_prime_max;
    report.scalars["score_quadratic"] = summary.score_quadratic;
    report.scalars["score_norm"] = summary.score.norm();
    report.scalars["score_consistent"] = summary.score_consistent ? 1.0 : 0.0;
    report.scalars["regularized"] = summary.regularized ? 1.0 : 0.0;
    report.scalars["true_state_distance_hs"] = (truth.matrix() - summary.rho_ml).squaredNorm();
    if (!summary.score_consistent) {
        report.warnings.push_back("full-rank estimator has a non-negligible score; treated as zero");
    }
    if (summary.regularized) {
        report.warnings.push_back("Fisher matrix needed regularization");
    }
    {
        Eigen::SelfAdjointEigenSolver<Matrix> eig(summary.fisher, Eigen::EigenvaluesOnly);
        const double smallest = eig.eigenvalues().minCoeff();
        report.scalars["fisher_condition"] = smallest > 0.0 ? eig.eigenvalues().maxCoeff() / smallest : kNan;
    }
    try {
        report.scalars["mixing_steps_A"] = mixing_step_estimate(summary, ComplexityCase::A);
        report.scalars["mixing_steps_B_II"] = mixing_step_estimate(summary, ComplexityCase::B_II);
    } catch (const Error &e) {
        report.warnings.push_back(std::string("mixing estimate unavailable: ") + e.what());
    }
    report.scalars["mixing_steps_B_I"] = mixing_step_estimate(summary, ComplexityCase::B_I);

    const LambdaGrid grid = run_stage("grid", [&] { return build_grid(config, d); });
    report.scalars["grid_min"] = grid[0];
    report.rows.reserve(grid.size());
    for (double lambda : grid.values()) {
        report.rows.push_back(empty_row(lambda));
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
        report.rows[j].lambda_prime = region_spec(summary, grid[j]).lambda_prime;
    }

    const LogLikelihood log_l(counts, pom);
    const Prior prior = config.prior == "gaussian"
                            ? Prior::gaussian(summary.r_ml,
                                              summary.fisher * (config.prior_scale / static_cast<double>(N)))
                            : Prior::uniform();
    SamplerConfig sampler;
    sampler.inflation = config.inflation;
    sampler.burn_in = config.burn_in;
    sampler.thinning = config.thinning;

    if (config.mode.in_region) {
        StageClock clock(report, timed, "in-region");
        const int threads = std::min<int>(pipeline_threads(), static_cast<int>(grid.size()));
        std::vector<std::string> failures(grid.size());
        std::vector<std::int64_t> clipped(grid.size(), 0);
        std::vector<std::int64_t> restarts(grid.size(), 0);
        const ReferenceDistance reference(summary.rho_ml);
        parallel_for(grid.size(), threads, [&](std::size_t j) {
            ReportRow &row = report.rows[j];
            try {
                const RegionSpec region = region_spec(summary, grid[j]);
                if (region.degenerate) {
                    row.u = row.u_stderr = 0.0;
                    row.S_hs = row.S_hs_stderr = row.S_tr = row.S_tr_stderr = row.S_b = row.S_b_stderr = 0.0;
                    return;
                }
                Rng rng = streams.stream(Stage::sampling, j);
                const SampleBatch batch =
                    sample_region(region, prior, summary, basis, log_l, config.samples, rng, sampler);
                const UEstimate u = u_from_batch(batch, grid[j], summary.log_l_max);
                row.u = u.u;
                row.u_stderr = u.stderr;
                clipped[j] = u.clipped;
                restarts[j] = batch.restarts;

                const auto K = static_cast<std::size_t>(batch.points.rows());
                std::vector<double> hs(K), tr(K), bures(K);
                CMatrix rho;
                for (std::size_t k = 0; k < K; ++k) {
                    basis.assemble(batch.points.row(static_cast<Eigen::Index>(k)).transpose(), rho);
                    hs[k] = reference(rho, DistanceMeasure::hilbert_schmidt);
                    tr[k] = reference(rho, DistanceMeasure::trace);
                    bures[k] = reference(rho, DistanceMeasure::bures);
                }
                row.S_hs = mean_of(hs);
                row.S_hs_stderr = batch_means_stderr(hs);
                row.S_tr = mean_of(tr);
                row.S_tr_stderr = batch_means_stderr(tr);
                row.S_b = mean_of(bures);
                row.S_b_stderr = batch_means_stderr(bures);
            } catch (const std::exception &e) {
                failures[j] = e.what();
            }
        });

        bool complete = true;
        std::int64_t clipped_total = 0;
        std::int64_t restart_total = 0;
        std::size_t clipped_points = 0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            if (!failures[j].empty()) {
                complete = false;
                report.errors.push_back("stage 'in-region': lambda index " + std::to_string(j) + ": " + failures[j]);
            }
            clipped_total += clipped[j];
            restart_total += restarts[j];
            clipped_points += clipped[j] > 0 ? 1 : 0;
        }
        report.scalars["clipped_samples"] = static_cast<double>(clipped_total);
        report.scalars["sampler_restarts"] = static_cast<double>(restart_total);
        if (clipped_total > 0) {
            report.warnings.push_back(std::to_string(clipped_total) + " samples at " + std::to_string(clipped_points) +
                                      " lambda points fell below the likelihood level and were clipped to q = 0");
        }
        if (complete) {
            try {
                std::vector<double> u(grid.size());
                for (std::size_t j = 0; j < grid.size(); ++j) {
                    u[j] = report.rows[j].u;
                }
                const OdeScheme scheme =
                    config.scheme == "forward" ? OdeScheme::forward_euler : OdeScheme::trapezoid;
                const std::vector<double> S = euler_size_spectrum(u, grid, scheme);
                const std::vector<double> C = credibility_spectrum(S, grid);
                for (std::size_t j = 0; j < grid.size(); ++j) {
                    report.rows[j].S_rel = S[j];
                    report.rows[j].C = C[j];
                }
                report.scalars["lambda_crit"] = lambda_crit(S, grid);
            } catch (const std::exception &e) {
                report.errors.push_back(std::string("stage 'certify': ") + e.what());
            }
        }
    }

    if (config.mode.analytic) {
        StageClock clock(report, timed, "analytic");
        try {
            const FidelityDyadics dyadics = fidelity_dyadics(summary, basis);
            for (std::size_t j = 0; j < grid.size(); ++j) {
                AnalyticCapacities values{};
                if (summary.case_label == CaseLabel::A) {
                    values = analytic_case_a(summary, dyadics, grid[j]);
                } else {
                    values = analytic_case_b(summary, region_spec(summary, grid[j]), dyadics,
                                             config.keep_bures_quadratic);
                }
                ReportRow &row = report.rows[j];
                row.S_hs_analytic = values.S_hs;
                row.S_tr_analytic = values.S_tr;
                row.S_b_analytic = values.S_b;
                row.u_analytic = values.u;
            }
        } catch (const std::exception &e) {
            report.errors.push_back(std::string("stage 'analytic': ") + e.what());
        }
    }

    if (config.mode.baseline) {
        StageClock clock(report, timed, "baseline");
        try {
            Rng rng = streams.stream(Stage::baseline);
            const BaselineResult base =
                mc_filter_baseline(summary, pom, counts, basis, grid, config.baseline_samples, rng);
            report.series["baseline_S"] = base.S;
            report.series["baseline_C"] = base.C;
            std::vector<double> yields(base.yield.begin(), base.yield.end());
            report.series["baseline_yield"] = yields;
            report.scalars["baseline_proposals"] = static_cast<double>(base.proposals);
            report.scalars["baseline_accepted"] = static_cast<double>(base.accepted);
        } catch (const std::exception &e) {
            report.errors.push_back(std::string("stage 'baseline': ") + e.what());
        }
    }

    if (config.mode.calibration) {
        StageClock clock(report, timed, "calibration");
        if (D != 2 || summary.case_label != CaseLabel::A) {
            report.warnings.push_back("calibration needs a qubit Case-A region; skipped");
        } else {
            try {
                Rng uniform_rng = streams.stream(Stage::calibration, 0);
                const CalibrationOutcome uni =
                    calibration_test(summary, basis, log_l, config, Prior::uniform(), CalibrationKind::uniform, 0.0,
                                     uniform_rng);
                const double kappa = config.calibration_prior_scale;
                Rng gaussian_rng = streams.stream(Stage::calibration, 1);
                const CalibrationOutcome gau = calibration_test(
                    summary, basis, log_l, config, Prior::gaussian(summary.r_ml, summary.fisher * kappa),
                    CalibrationKind::gaussian, kappa, gaussian_rng);
                report.scalars["calibration_p_uniform"] = uni.p_value;
                report.scalars["calibration_chi2_uniform"] = uni.statistic;
                report.scalars["calibration_dof_uniform"] = uni.dof;
                report.scalars["calibration_p_gaussian"] = gau.p_value;
                report.scalars["calibration_chi2_gaussian"] = gau.statistic;
                report.scalars["calibration_dof_gaussian"] = gau.dof;
            } catch (const std::exception &e) {
                report.errors.push_back(std::string("stage 'calibration': ") + e.what());
            }
        }
    }

    if (config.mode.correlation) {
        StageClock clock(report, timed, "correlation");
        if (summary.case_label != CaseLabel::B) {
            report.warnings.push_back("correlation comparison needs a Case-B region; skipped");
        } else {
            try {
                const RegionSpec region = region_spec(summary, config.correlation_lambda);
                SamplerConfig chain;
                chain.burn_in = 0;
                int corner_smaller = 0;
                std::vector<double> corner_means;
                std::vector<double> interior_means;
                for (int pair = 0; pair < config.correlation_pairs; ++pair) {
                    Rng corner_rng = streams.stream(Stage::correlation, 2 * static_cast<std::uint64_t>(pair));
                    const SampleBatch corner = hit_and_run_sample(region, prior, basis, log_l, summary.r_ml,
                                                                  config.correlation_steps, corner_rng, chain);
                    Rng interior_rng =
                        streams.stream(Stage::correlation, 2 * static_cast<std::uint64_t>(pair) + 1);
                    const BlochVector start = find_interior_point(region, summary, basis, 2 * D, interior_rng);
                    const SampleBatch interior = hit_and_run_sample(region, prior, basis, log_l, start,
                                                                    config.correlation_steps, interior_rng, chain);
                    const double c_mean = mean_of(hopping_profile(corner));
                    const double i_mean = mean_of(hopping_profile(interior));
                    corner_means.push_back(c_mean);
                    interior_means.push_back(i_mean);
                    corner_smaller += c_mean < i_mean ? 1 : 0;
                }
                report.scalars["correlation_fraction"] =
                    static_cast<double>(corner_smaller) / static_cast<double>(config.correlation_pairs);
                report.series["correlation_corner_hops"] = corner_means;
                report.series["correlation_interior_hops"] = interior_means;
            } catch (const std::exception &e) {
                report.errors.push_back(std::string("stage 'correlation': ") + e.what());
            }
        }
    }

    report.scalars["rng_streams"] = static_cast<double>(streams.streams_issued());
    return report;
}

} // namespace credreg
