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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "credreg/error.hpp"
#include "credreg/pipeline.hpp"

using namespace credreg;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig config;
    config.dimension = 2;
    config.outcomes = 8;
    config.copies = 2000;
    config.grid = "log:10";
    config.samples = 500;
    config.seed = 11;
    return config;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool same_value(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

ErrorCode code_of(const std::function<void()> &body) {
    try {
        body();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::internal;
}

} // namespace

TEST_CASE("config text, settings and validation") {
    const ExperimentConfig config = parse_config_text("# qubit run\n"
                                                      "dimension = 3\n"
                                                      "baseline-samples = 50   # hyphens normalize\n"
                                                      "prior = \"gaussian\"\n"
                                                      "mode = in-region,calibration\n");
    CHECK(config.dimension == 3);
    CHECK(config.baseline_samples == 50);
    CHECK(config.prior == "gaussian");
    CHECK(config.mode.calibration);
    CHECK_FALSE(config.mode.analytic);
    CHECK(get_setting(config, "dimension") == "3");
    CHECK(config.resolved_outcomes() == 27);
    CHECK(config.resolved_copies() == 500 * 27);
    CHECK(config.resolved_rank() == 3);
    CHECK(parse_mode("all").baseline);
    CHECK(mode_string(parse_mode("analytic,in-region")) == mode_string(ModeFlags{}));

    ExperimentConfig edited = config;
    apply_setting(edited, "samples", "2000");
    CHECK(edited.samples == 2000);
    CHECK(code_of([&] { apply_setting(edited, "no_such_key", "1"); }) == ErrorCode::invalid_config);
    CHECK(code_of([&] { apply_setting(edited, "samples", "many"); }) == ErrorCode::invalid_config);
    CHECK(code_of([] { parse_config_text("dimension 3\n"); }) == ErrorCode::invalid_config);
    CHECK(code_of([] { load_config_file("/nonexistent/credreg.cfg"); }) == ErrorCode::io_error);

    for (const auto &[key, value] : std::vector<std::pair<std::string, std::string>>{
             {"dimension", "1"}, {"outcomes", "3"}, {"grid", "cubic:10"}, {"grid", "log:1"}, {"scheme", "rk4"},
             {"samples", "10"}, {"inflation", "3"}, {"prior", "jeffreys"}}) {
        ExperimentConfig bad = small_config();
        apply_setting(bad, key, value);
        try {
            validate_config(bad);
            FAIL("accepted " << key << " = " << value);
        } catch (const Error &e) {
            CHECK(e.code() == ErrorCode::invalid_config);
            CHECK(std::string(e.what()).find("'" + key + "'") != std::string::npos);
        }
    }
    ExperimentConfig big_baseline = small_config();
    big_baseline.dimension = 4;
    big_baseline.outcomes = 0;
    big_baseline.mode.baseline = true;
    CHECK_THROWS_AS(validate_config(big_baseline), Error);
}

TEST_CASE("config hash is canonical and ignores the output directory") {
    ExperimentConfig a = small_config();
    ExperimentConfig b = parse_config_text(canonical_config(a));
    CHECK(canonical_config(b) == canonical_config(a));
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.out = "/tmp/elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 12;
    CHECK(config_hash(a) != config_hash(b));
    const std::string canonical = canonical_config(a);
    CHECK(canonical.find("out=") == std::string::npos);
}

TEST_CASE("reports are deterministic across runs and thread counts") {
    ExperimentConfig config = small_config();
    config.mode = parse_mode("in-region,analytic,baseline");
    config.baseline_samples = 20000;
    setenv("CREDREG_THREADS", "1", 1);
    const Report serial = run_pipeline(config);
    setenv("CREDREG_THREADS", "3", 1);
    const Report parallel = run_pipeline(config);
    const Report again = run_pipeline(config);
    unsetenv("CREDREG_THREADS");
    CHECK(report_csv(serial) == report_csv(parallel));
    CHECK(report_json(serial) == report_json(parallel));
    CHECK(report_csv(parallel) == report_csv(again));
    CHECK(serial.timings.empty());
    CHECK(report_json(serial).find("\"timings\"") == std::string::npos);

    REQUIRE(serial.rows.size() == 10);
    CHECK(serial.rows.front().C == 1.0);
    CHECK(serial.rows.back().lambda == 1.0);
    CHECK(serial.labels.at("case") == "A");
    CHECK(serial.series.at("baseline_C").size() == 10);
    CHECK(serial.scalars.at("baseline_accepted") == 20000.0);
    CHECK(std::isfinite(serial.scalars.at("lambda_crit")));
}

TEST_CASE("analytic-only runs consume three random streams and leave sampled columns empty") {
    ExperimentConfig config = small_config();
    config.mode = parse_mode("analytic");
    const Report report = run_pipeline(config);
    CHECK(report.scalars.at("rng_streams") == 3.0);
    for (const ReportRow &row : report.rows) {
        CHECK(std::isnan(row.u));
        CHECK(std::isnan(row.S_hs));
        CHECK(std::isfinite(row.S_hs_analytic));
    }
    CHECK(report_csv(report).find(",NA,") != std::string::npos);

    config.mode = parse_mode("in-region");
    const Report sampled = run_pipeline(config);
    for (const ReportRow &row : sampled.rows) {
        CHECK(std::isnan(row.S_hs_analytic));
        CHECK(std::isnan(row.u_analytic));
    }
}

TEST_CASE("timings are recorded only on request") {
    ExperimentConfig config = small_config();
    config.mode = parse_mode("analytic");
    config.record_timings = true;
    const Report report = run_pipeline(config);
    CHECK(report.timings.count("ml") == 1);
    CHECK(report_json(report).find("\"timings\"") != std::string::npos);
}

TEST_CASE("CSV output round-trips and an empty report has only the header") {
    ExperimentConfig config = small_config();
    const Report report = run_pipeline(config);
    const std::string csv = report_csv(report);
    CHECK(csv.rfind(std::string(kReportHeader) + "\n", 0) == 0);
    const auto rows = parse_report_csv(csv);
    REQUIRE(rows.size() == report.rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const double *a = &rows[j].lambda;
        const double *b = &report.rows[j].lambda;
        for (int k = 0; k < 16; ++k) {
            CHECK(same_value(a[k], b[k]));
        }
    }
    Report empty;
    CHECK(report_csv(empty) == std::string(kReportHeader) + "\n");
    CHECK(parse_report_csv(report_csv(empty)).empty());
    CHECK_THROWS_AS(parse_report_csv("lambda,u\n1,2\n"), Error);
}

TEST_CASE("reports are written under the config hash") {
    ExperimentConfig config = small_config();
    config.mode = parse_mode("analytic");
    const Report report = run_pipeline(config);
    const auto dir = std::filesystem::temp_directory_path() / "credreg_pipeline_test";
    std::filesystem::remove_all(dir);
    const ReportFiles files = emit_report(report, (dir / "nested").string());
    CHECK(std::filesystem::path(files.csv).filename() == "credreg_" + config_hash(config) + ".csv");
    CHECK(slurp(files.csv) == report_csv(report));
    CHECK(slurp(files.json) == report_json(report));
    std::filesystem::remove_all(dir);

    CHECK(code_of([&] { emit_report(report, "/proc/credreg/denied"); }) == ErrorCode::io_error);
}

TEST_CASE("stage failures name the stage") {
    ExperimentConfig config = small_config();
    config.outcomes = 3;
    try {
        run_pipeline(config);
        FAIL("invalid config ran");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::invalid_config);
        CHECK(std::string(e.what()).rfind("stage 'validate': ", 0) == 0);
    }
}
