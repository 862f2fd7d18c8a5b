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

#include "credreg/credreg.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "credreg/analytic.hpp"
#include "credreg/capacity.hpp"
#include "credreg/error.hpp"
#include "credreg/pipeline.hpp"

struct credreg_config {
    credreg::ExperimentConfig value;
};

struct credreg_report {
    credreg::Report value;
};

static_assert(static_cast<int>(credreg::ErrorCode::internal) == CREDREG_INTERNAL);
static_assert(static_cast<int>(credreg::ErrorCode::invalid_config) == CREDREG_INVALID_CONFIG);
static_assert(sizeof(credreg_row) == sizeof(credreg::ReportRow));

namespace {

thread_local std::string last_error;

credreg_status record(credreg_status status, const std::string &message) {
    last_error = message;
    return status;
}

/// Runs body and converts any exception into a status code.
template <typename F> credreg_status guarded(F &&body) {
    try {
        body();
        last_error.clear();
        return CREDREG_OK;
    } catch (const credreg::Error &e) {
        return record(static_cast<credreg_status>(e.code()), e.what());
    } catch (const std::bad_alloc &) {
        return record(CREDREG_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return record(CREDREG_INTERNAL, e.what());
    }
}

void require_pointer(const void *pointer, const char *name) {
    credreg::require(pointer != nullptr, credreg::ErrorCode::invalid_argument, std::string(name) + " is null");
}

void copy_out(const std::string &text, char *buffer, std::size_t size, std::size_t *needed) {
    if (needed != nullptr) {
        *needed = text.size();
    }
    if (buffer != nullptr && size > 0) {
        const std::size_t n = std::min(size - 1, text.size());
        std::memcpy(buffer, text.data(), n);
        buffer[n] = '\0';
    }
}

credreg_status copy_indexed(const credreg_report *report, const std::vector<std::string> credreg::Report::*list,
                            std::size_t index, char *buffer, std::size_t size, std::size_t *needed) {
    return guarded([&] {
        require_pointer(report, "report");
        const auto &items = report->value.*list;
        credreg::require(index < items.size(), credreg::ErrorCode::invalid_argument, "index out of range");
        copy_out(items[index], buffer, size, needed);
    });
}

} // namespace

extern "C" {

const char *credreg_last_error(void) { return last_error.c_str(); }

const char *credreg_status_string(credreg_status status) {
    if (status == CREDREG_OK) {
        return "ok";
    }
    return credreg::error_code_name(static_cast<credreg::ErrorCode>(status));
}

const char *credreg_version(void) { return CREDREG_VERSION_STRING; }

credreg_status credreg_config_create(credreg_config **out) {
    return guarded([&] {
        require_pointer(out, "out");
        *out = new credreg_config{};
    });
}

void credreg_config_destroy(credreg_config *config) { delete config; }

credreg_status credreg_config_load_file(credreg_config *config, const char *path) {
    return guarded([&] {
        require_pointer(config, "config");
        require_pointer(path, "path");
        config->value = credreg::load_config_file(path, config->value);
    });
}

credreg_status credreg_config_set(credreg_config *config, const char *key, const char *value) {
    return guarded([&] {
        require_pointer(config, "config");
        require_pointer(key, "key");
        require_pointer(value, "value");
        credreg::apply_setting(config->value, key, value);
    });
}

credreg_status credreg_config_get(const credreg_config *config, const char *key, char *buffer, size_t size,
                                  size_t *needed) {
    return guarded([&] {
        require_pointer(config, "config");
        require_pointer(key, "key");
        copy_out(credreg::get_setting(config->value, key), buffer, size, needed);
    });
}

credreg_status credreg_config_validate(const credreg_config *config) {
    return guarded([&] {
        require_pointer(config, "config");
        credreg::validate_config(config->value);
    });
}

credreg_status credreg_config_hash(const credreg_config *config, char *buffer, size_t size) {
    return guarded([&] {
        require_pointer(config, "config");
        require_pointer(buffer, "buffer");
        credreg::require(size >= 17, credreg::ErrorCode::invalid_argument, "hash buffer needs 17 bytes");
        copy_out(credreg::config_hash(config->value), buffer, size, nullptr);
    });
}

credreg_status credreg_run_pipeline(const credreg_config *config, credreg_report **out) {
    return guarded([&] {
        require_pointer(config, "config");
        require_pointer(out, "out");
        *out = nullptr;
        auto report = std::make_unique<credreg_report>();
        report->value = credreg::run_pipeline(config->value);
        *out = report.release();
    });
}

void credreg_report_destroy(credreg_report *report) { delete report; }

size_t credreg_report_row_count(const credreg_report *report) {
    return report == nullptr ? 0 : report->value.rows.size();
}

credreg_status credreg_report_row(const credreg_report *report, size_t index, credreg_row *out) {
    return guarded([&] {
        require_pointer(report, "report");
        require_pointer(out, "out");
        credreg::require(index < report->value.rows.size(), credreg::ErrorCode::invalid_argument,
                         "row index out of range");
        std::memcpy(out, &report->value.rows[index], sizeof(credreg_row));
    });
}

credreg_status credreg_report_scalar(const credreg_report *report, const char *name, double *out) {
    return guarded([&] {
        require_pointer(report, "report");
        require_pointer(name, "name");
        require_pointer(out, "out");
        const auto it = report->value.scalars.find(name);
        credreg::require(it != report->value.scalars.end(), credreg::ErrorCode::invalid_argument,
                         std::string("no scalar named '") + name + "'");
        *out = it->second;
    });
}

credreg_status credreg_report_label(const credreg_report *report, const char *name, char *buffer, size_t size,
                                    size_t *needed) {
    return guarded([&] {
        require_pointer(report, "report");
        require_pointer(name, "name");
        const auto it = report->value.labels.find(name);
        credreg::require(it != report->value.labels.end(), credreg::ErrorCode::invalid_argument,
                         std::string("no label named '") + name + "'");
        copy_out(it->second, buffer, size, needed);
    });
}

size_t credreg_report_series_length(const credreg_report *report, const char *name) {
    if (report == nullptr || name == nullptr) {
        return 0;
    }
    const auto it = report->value.series.find(name);
    return it == report->value.series.end() ? 0 : it->second.size();
}

credreg_status credreg_report_series(const credreg_report *report, const char *name, double *values, size_t size) {
    return guarded([&] {
        require_pointer(report, "report");
        require_pointer(name, "name");
        const auto it = report->value.series.find(name);
        credreg::require(it != report->value.series.end(), credreg::ErrorCode::invalid_argument,
                         std::string("no series named '") + name + "'");
        credreg::require(size >= it->second.size(), credreg::ErrorCode::invalid_argument, "series buffer too small");
        require_pointer(values, "values");
        std::copy(it->second.begin(), it->second.end(), values);
    });
}

size_t credreg_report_warning_count(const credreg_report *report) {
    return report == nullptr ? 0 : report->value.warnings.size();
}

size_t credreg_report_error_count(const credreg_report *report) {
    return report == nullptr ? 0 : report->value.errors.size();
}

credreg_status credreg_report_warning(const credreg_report *report, size_t index, char *buffer, size_t size,
                                      size_t *needed) {
    return copy_indexed(report, &credreg::Report::warnings, index, buffer, size, needed);
}

credreg_status credreg_report_error(const credreg_report *report, size_t index, char *buffer, size_t size,
                                    size_t *needed) {
    return copy_indexed(report, &credreg::Report::errors, index, buffer, size, needed);
}

credreg_status credreg_report_write(const credreg_report *report, const char *directory, char *path_buffer,
                                    size_t size, size_t *needed) {
    return guarded([&] {
        require_pointer(report, "report");
        require_pointer(directory, "directory");
        const credreg::ReportFiles files = credreg::emit_report(report->value, directory);
        copy_out(files.csv, path_buffer, size, needed);
    });
}

credreg_status credreg_report_csv(const credreg_report *report, char *buffer, size_t size, size_t *needed) {
    return guarded([&] {
        require_pointer(report, "report");
        copy_out(credreg::report_csv(report->value), buffer, size, needed);
    });
}

credreg_status credreg_report_json(const credreg_report *report, char *buffer, size_t size, size_t *needed) {
    return guarded([&] {
        require_pointer(report, "report");
        copy_out(credreg::report_json(report->value), buffer, size, needed);
    });
}

credreg_status credreg_incomplete_beta(double x, double a, double b, double *out) {
    return guarded([&] {
        require_pointer(out, "out");
        *out = credreg::regularized_incomplete_beta(x, a, b);
    });
}

credreg_status credreg_unit_ball_volume(int d, double *out) {
    return guarded([&] {
        require_pointer(out, "out");
        *out = credreg::unit_ball_volume(d);
    });
}

credreg_status credreg_cap_moments_compute(int d, double l, credreg_cap_moments *out) {
    return guarded([&] {
        require_pointer(out, "out");
        const credreg::CapMoments m = credreg::cap_moments(d, l);
        *out = credreg_cap_moments{m.I0, m.I1_coefficient, m.I2_iso, m.I2_aniso};
    });
}

credreg_status credreg_tr_hs_asymptotic(double s_hs, int dimension, double *out) {
    return guarded([&] {
        require_pointer(out, "out");
        *out = credreg::tr_hs_asymptotic(s_hs, dimension);
    });
}

} // extern "C"
