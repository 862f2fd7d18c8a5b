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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "credreg/certify.hpp"

namespace credreg {

struct ModeFlags {
    bool in_region = true;
    bool baseline = false;
    bool analytic = true;
    bool calibration = false;
    bool correlation = false;
};

/// Every setting of one experiment; `out` is the only field excluded from the hash.
struct ExperimentConfig {
    int dimension = 2;
    /// 0 selects D^3.
    int outcomes = 0;
    /// 0 selects 500 copies per outcome.
    std::int64_t copies = 0;
    /// 0 selects D.
    int rank = 0;
    double state_mix = 0.0;
    std::string prior = "uniform";
    double prior_scale = 1.0;
    std::string grid = "log:200";
    /// 0 selects default_lambda_min(d).
    double grid_min = 0.0;
    std::string scheme = "trapezoid";
    int samples = 20000;
    std::int64_t baseline_samples = 1000000;
    std::uint64_t seed = 1;
    ModeFlags mode;
    std::string out = ".";
    double inflation = 1.0;
    int burn_in = 0;
    int thinning = 1;
    bool keep_bures_quadratic = true;
    int ml_max_iters = 5000;
    double ml_tolerance = 1e-8;
    double calibration_lambda = 0.1;
    double calibration_prior_scale = 1.0;
    int calibration_samples = 100000;
    int calibration_thinning = 10;
    double correlation_lambda = 0.1;
    int correlation_steps = 100;
    int correlation_pairs = 20;
    bool record_timings = false;

    [[nodiscard]] int resolved_outcomes() const;
    [[nodiscard]] std::int64_t resolved_copies() const;
    [[nodiscard]] int resolved_rank() const;
};

/// Throws invalid_config naming the offending key.
void validate_config(const ExperimentConfig &config);

/// Sets one key from its text form, e.g. ("dimension", "3").
void apply_setting(ExperimentConfig &config, const std::string &key, const std::string &value);

/// Reads the text form of one key.
std::string get_setting(const ExperimentConfig &config, const std::string &key);

/// All keys understood by apply_setting, sorted.
std::vector<std::string> setting_keys();

/// Parses flat `key = value` lines; `#` starts a comment, values may be quoted.
ExperimentConfig parse_config_text(const std::string &text, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string &path, ExperimentConfig base = {});

/// Sorted `key=value` lines of every hashed field.
std::string canonical_config(const ExperimentConfig &config);

/// 16 hex digits of FNV-1a over canonical_config.
std::string config_hash(const ExperimentConfig &config);

std::string mode_string(const ModeFlags &mode);
ModeFlags parse_mode(const std::string &text);

/// One CSV row; NaN marks a missing value.
struct ReportRow {
    double lambda;
    double lambda_prime;
    double u;
    double u_stderr;
    double S_rel;
    double C;
    double S_hs;
    double S_hs_stderr;
    double S_tr;
    double S_tr_stderr;
    double S_b;
    double S_b_stderr;
    double S_hs_analytic;
    double S_tr_analytic;
    double S_b_analytic;
    double u_analytic;
};

inline constexpr const char *kReportHeader =
    "lambda,lambda_prime,u,u_stderr,S_rel,C,S_hs,S_hs_stderr,S_tr,S_tr_stderr,S_b,S_b_stderr,"
    "S_hs_analytic,S_tr_analytic,S_b_analytic,u_analytic";

struct Report {
    std::vector<ReportRow> rows;
    std::map<std::string, double> scalars;
    std::map<std::string, std::string> labels;
    std::map<std::string, std::vector<double>> series;
    std::map<std::string, double> timings;
    std::vector<std::string> warnings;
    std::vector<std::string> errors;
    std::string config_text;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string out_dir;
};

/// Full experiment: state, measurement, data, ML, summary, per-lambda sampling and comparisons.
Report run_pipeline(const ExperimentConfig &config);

std::string report_csv(const Report &report);
std::string report_json(const Report &report);

struct ReportFiles {
    std::string csv;
    std::string json;
};

/// Writes `credreg_<hash>.csv` and `credreg_<hash>.json` into `directory`.
ReportFiles emit_report(const Report &report, const std::string &directory);

/// Rows of a CSV produced by report_csv; `NA` becomes NaN.
std::vector<ReportRow> parse_report_csv(const std::string &text);

/// Width of the per-lambda fan-out: CREDREG_THREADS if set, else hardware concurrency.
int pipeline_threads();

} // namespace credreg
