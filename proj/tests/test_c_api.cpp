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
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "credreg/credreg.h"
#include "oracles.hpp"

namespace {

credreg_config *small_config() {
    credreg_config *config = nullptr;
    REQUIRE(credreg_config_create(&config) == CREDREG_OK);
    const char *settings[][2] = {{"dimension", "2"}, {"outcomes", "8"},  {"copies", "2000"},
                                 {"grid", "log:8"},  {"samples", "400"}, {"seed", "5"}};
    for (const auto &kv : settings) {
        REQUIRE(credreg_config_set(config, kv[0], kv[1]) == CREDREG_OK);
    }
    return config;
}

std::string fetch(credreg_status (*getter)(const credreg_report *, char *, size_t, size_t *),
                  const credreg_report *report) {
    size_t needed = 0;
    REQUIRE(getter(report, nullptr, 0, &needed) == CREDREG_OK);
    std::string text(needed + 1, '\0');
    REQUIRE(getter(report, text.data(), text.size(), &needed) == CREDREG_OK);
    text.resize(needed);
    return text;
}

} // namespace

TEST_CASE("status strings and version") {
    CHECK(std::string(credreg_status_string(CREDREG_OK)) == "ok");
    CHECK(std::string(credreg_status_string(CREDREG_IO_ERROR)).size() > 0);
    CHECK(std::string(credreg_version()).size() > 0);
}

TEST_CASE("config handle round-trips settings and reports errors") {
    credreg_config *config = small_config();
    char buffer[64];
    size_t needed = 0;
    CHECK(credreg_config_get(config, "grid", buffer, sizeof buffer, &needed) == CREDREG_OK);
    CHECK(std::string(buffer) == "log:8");
    CHECK(needed == 5);
    char tiny[3];
    CHECK(credreg_config_get(config, "grid", tiny, sizeof tiny, &needed) == CREDREG_OK);
    CHECK(std::string(tiny) == "lo");
    CHECK(needed == 5);

    CHECK(credreg_config_set(config, "bogus", "1") == CREDREG_INVALID_CONFIG);
    CHECK(std::string(credreg_last_error()).find("bogus") != std::string::npos);
    CHECK(credreg_config_set(nullptr, "seed", "1") == CREDREG_INVALID_ARGUMENT);
    CHECK(credreg_config_load_file(config, "/nonexistent/credreg.cfg") == CREDREG_IO_ERROR);

    char hash[17];
    CHECK(credreg_config_hash(config, hash, sizeof hash) == CREDREG_OK);
    CHECK(std::string(hash).size() == 16);
    CHECK(credreg_config_hash(config, hash, 8) == CREDREG_INVALID_ARGUMENT);

    CHECK(credreg_config_validate(config) == CREDREG_OK);
    CHECK(credreg_config_set(config, "outcomes", "3") == CREDREG_OK);
    CHECK(credreg_config_validate(config) == CREDREG_INVALID_CONFIG);
    credreg_report *report = nullptr;
    CHECK(credreg_run_pipeline(config, &report) == CREDREG_INVALID_CONFIG);
    CHECK(report == nullptr);
    CHECK(std::string(credreg_last_error()).find("stage 'validate'") != std::string::npos);
    credreg_config_destroy(config);
    credreg_config_destroy(nullptr);
}

TEST_CASE("pipeline through the C interface") {
    credreg_config *config = small_config();
    credreg_report *report = nullptr;
    REQUIRE(credreg_run_pipeline(config, &report) == CREDREG_OK);
    REQUIRE(credreg_report_row_count(report) == 8);
    credreg_row first{};
    credreg_row last{};
    REQUIRE(credreg_report_row(report, 0, &first) == CREDREG_OK);
    REQUIRE(credreg_report_row(report, 7, &last) == CREDREG_OK);
    CHECK(first.C == 1.0);
    CHECK(last.lambda == 1.0);
    CHECK(std::isfinite(first.S_hs_analytic));
    CHECK(credreg_report_row(report, 8, &last) == CREDREG_INVALID_ARGUMENT);

    double value = 0.0;
    CHECK(credreg_report_scalar(report, "D", &value) == CREDREG_OK);
    CHECK(value == 2.0);
    CHECK(credreg_report_scalar(report, "missing", &value) == CREDREG_INVALID_ARGUMENT);
    char label[8];
    size_t needed = 0;
    CHECK(credreg_report_label(report, "case", label, sizeof label, &needed) == CREDREG_OK);
    CHECK(std::string(label) == "A");
    CHECK(credreg_report_series_length(report, "missing") == 0);
    CHECK(credreg_report_error_count(report) == 0);

    const std::string csv = fetch(credreg_report_csv, report);
    CHECK(csv.rfind("lambda,lambda_prime,u,", 0) == 0);
    const std::string json = fetch(credreg_report_json, report);
    CHECK(json.find("\"config_hash\"") != std::string::npos);

    const auto dir = std::filesystem::temp_directory_path() / "credreg_c_api_test";
    std::filesystem::remove_all(dir);
    char path[512];
    REQUIRE(credreg_report_write(report, dir.string().c_str(), path, sizeof path, &needed) == CREDREG_OK);
    CHECK(std::filesystem::exists(path));
    CHECK(std::filesystem::file_size(path) == csv.size());
    std::filesystem::remove_all(dir);
    CHECK(credreg_report_write(report, "/proc/credreg/denied", path, sizeof path, &needed) == CREDREG_IO_ERROR);

    credreg_report_destroy(report);
    credreg_config_destroy(config);
}

TEST_CASE("numeric helpers agree with independent oracles") {
    double value = 0.0;
    REQUIRE(credreg_incomplete_beta(0.3, 2.5, 1.5, &value) == CREDREG_OK);
    CHECK(value == doctest::Approx(credreg::oracle::incomplete_beta_quadrature(0.3, 2.5, 1.5)).epsilon(1e-7));
    CHECK(credreg_incomplete_beta(2.0, 1.0, 1.0, &value) == CREDREG_INVALID_ARGUMENT);
    REQUIRE(credreg_unit_ball_volume(5, &value) == CREDREG_OK);
    CHECK(value == doctest::Approx(credreg::oracle::ball_volume_recursive(5)));
    credreg_cap_moments moments{};
    REQUIRE(credreg_cap_moments_compute(1, 0.25, &moments) == CREDREG_OK);
    CHECK(moments.I0 == doctest::Approx(0.75));
    CHECK(credreg_cap_moments_compute(0, 0.25, &moments) == CREDREG_INVALID_ARGUMENT);
    REQUIRE(credreg_tr_hs_asymptotic(0.0, 4, &value) == CREDREG_OK);
    CHECK(value == 0.0);
    CHECK(credreg_tr_hs_asymptotic(-1.0, 4, &value) == CREDREG_INVALID_ARGUMENT);
}
