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

// Command-line front end. Links only the C API.

#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "credreg/credreg.h"

namespace {

constexpr int kExitFlagged = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFailure = 3;

int report_failure(credreg_status status, const char *what) {
    std::fprintf(stderr, "credreg: %s failed (%s): %s\n", what, credreg_status_string(status), credreg_last_error());
    return status == CREDREG_INVALID_CONFIG || status == CREDREG_IO_ERROR ? kExitConfig : kExitFailure;
}

std::string fetch_text(credreg_status (*getter)(const credreg_report *, size_t, char *, size_t, size_t *),
                       const credreg_report *report, size_t index) {
    size_t needed = 0;
    getter(report, index, nullptr, 0, &needed);
    std::string text(needed + 1, '\0');
    getter(report, index, text.data(), text.size(), &needed);
    text.resize(needed);
    return text;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Credible-region size, credibility and capacity spectra for simulated tomography"};
    app.set_version_flag("--version", std::string(credreg_version()));

    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    app.add_option("--config", config_path, "flat key = value config file")->check(CLI::ExistingFile);

    struct Flag {
        const char *name;
        const char *key;
        const char *help;
    };
    const Flag flags[] = {
        {"--dimension", "dimension", "Hilbert-space dimension D"},
        {"--outcomes", "outcomes", "number of POM outcomes M (default D^3)"},
        {"--copies", "copies", "number of measured copies N (default 500 M)"},
        {"--rank", "rank", "rank of the simulated true state (default D)"},
        {"--prior", "prior", "uniform or gaussian"},
        {"--samples", "samples", "hit-and-run samples per lambda"},
        {"--grid", "grid", "lambda grid, e.g. log:200, linear:100, hybrid:200"},
        {"--seed", "seed", "master seed"},
        {"--mode", "mode", "comma list of in-region, analytic, baseline, calibration, correlation"},
        {"--out", "out", "output directory"},
    };
    std::vector<std::string> values(std::size(flags));
    for (std::size_t i = 0; i < std::size(flags); ++i) {
        app.add_option(flags[i].name, values[i], flags[i].help);
    }
    std::vector<std::string> sets;
    app.add_option("--set", sets, "extra key=value override, repeatable");
    bool timings = false;
    app.add_flag("--timings", timings, "record stage wall times in the JSON output");
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress warnings on stderr");

    CLI11_PARSE(app, argc, argv);

    credreg_config *config = nullptr;
    credreg_status status = credreg_config_create(&config);
    if (status != CREDREG_OK) {
        return report_failure(status, "config creation");
    }
    const auto cleanup_config = [&] { credreg_config_destroy(config); };

    if (!config_path.empty()) {
        status = credreg_config_load_file(config, config_path.c_str());
        if (status != CREDREG_OK) {
            cleanup_config();
            return report_failure(status, "config load");
        }
    }
    for (std::size_t i = 0; i < std::size(flags); ++i) {
        if (app.count(flags[i].name) > 0) {
            overrides.emplace_back(flags[i].key, values[i]);
        }
    }
    for (const std::string &item : sets) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "credreg: --set expects key=value, got '%s'\n", item.c_str());
            cleanup_config();
            return kExitConfig;
        }
        overrides.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    if (timings) {
        overrides.emplace_back("record_timings", "true");
    }
    for (const auto &[key, value] : overrides) {
        status = credreg_config_set(config, key.c_str(), value.c_str());
        if (status != CREDREG_OK) {
            cleanup_config();
            return report_failure(status, "config override");
        }
    }
    status = credreg_config_validate(config);
    if (status != CREDREG_OK) {
        cleanup_config();
        return report_failure(status, "config validation");
    }

    char out_dir[4096];
    size_t needed = 0;
    credreg_config_get(config, "out", out_dir, sizeof out_dir, &needed);

    credreg_report *report = nullptr;
    status = credreg_run_pipeline(config, &report);
    cleanup_config();
    if (status != CREDREG_OK) {
        return report_failure(status, "pipeline");
    }

    char csv_path[4096];
    status = credreg_report_write(report, out_dir, csv_path, sizeof csv_path, &needed);
    if (status != CREDREG_OK) {
        credreg_report_destroy(report);
        return report_failure(status, "report write");
    }

    if (!quiet) {
        for (size_t i = 0; i < credreg_report_warning_count(report); ++i) {
            std::fprintf(stderr, "warning: %s\n", fetch_text(credreg_report_warning, report, i).c_str());
        }
    }
    const size_t error_count = credreg_report_error_count(report);
    for (size_t i = 0; i < error_count; ++i) {
        std::fprintf(stderr, "error: %s\n", fetch_text(credreg_report_error, report, i).c_str());
    }

    double lambda_crit = 0.0;
    if (credreg_report_scalar(report, "lambda_crit", &lambda_crit) == CREDREG_OK) {
        std::printf("lambda_crit %.6g\n", lambda_crit);
    }
    std::printf("wrote %s\n", csv_path);
    credreg_report_destroy(report);
    return error_count == 0 ? 0 : kExitFlagged;
}
