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

#include <array>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <json.hpp>

#include "credreg/error.hpp"
#include "credreg/pipeline.hpp"

namespace credreg {

namespace {

constexpr std::size_t kColumns = 16;

std::array<double, kColumns> row_values(const ReportRow &row) {
    return {row.lambda,   row.lambda_prime,  row.u,           row.u_stderr,      row.S_rel,         row.C,
            row.S_hs,     row.S_hs_stderr,   row.S_tr,        row.S_tr_stderr,   row.S_b,           row.S_b_stderr,
            row.S_hs_analytic, row.S_tr_analytic, row.S_b_analytic, row.u_analytic};
}

ReportRow row_from_values(const std::array<double, kColumns> &v) {
    return ReportRow{v[0], v[1], v[2],  v[3],  v[4],  v[5],  v[6],  v[7],
                     v[8], v[9], v[10], v[11], v[12], v[13], v[14], v[15]};
}

std::string format_cell(double value) {
    if (!std::isfinite(value)) {
        return "NA";
    }
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

nlohmann::json number(double value) { return std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr); }

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCode::io_error, "cannot open '" + path.string() + "' for writing");
    }
    out << content;
    if (!out) {
        fail(ErrorCode::io_error, "failed writing '" + path.string() + "'");
    }
}

} // namespace

std::string report_csv(const Report &report) {
    std::string out = kReportHeader;
    out += '\n';
    for (const ReportRow &row : report.rows) {
        const auto values = row_values(row);
        for (std::size_t c = 0; c < kColumns; ++c) {
            if (c > 0) {
                out += ',';
            }
            out += format_cell(values[c]);
        }
        out += '\n';
    }
    return out;
}

std::string report_json(const Report &report) {
    nlohmann::json doc;
    doc["config_hash"] = report.config_hash;
    doc["config"] = report.config_text;
    doc["seed"] = report.seed;
    doc["labels"] = report.labels;
    nlohmann::json scalars = nlohmann::json::object();
    for (const auto &[name, value] : report.scalars) {
        scalars[name] = number(value);
    }
    doc["scalars"] = scalars;
    nlohmann::json series = nlohmann::json::object();
    for (const auto &[name, values] : report.series) {
        nlohmann::json list = nlohmann::json::array();
        for (double v : values) {
            list.push_back(number(v));
        }
        series[name] = list;
    }
    doc["series"] = series;
    nlohmann::json lambda = nlohmann::json::array();
    for (const ReportRow &row : report.rows) {
        lambda.push_back(number(row.lambda));
    }
    doc["lambda"] = lambda;
    if (!report.timings.empty()) {
        doc["timings"] = report.timings;
    }
    doc["warnings"] = report.warnings;
    doc["errors"] = report.errors;
    return doc.dump(2) + "\n";
}

ReportFiles emit_report(const Report &report, const std::string &directory) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) {
        fail(ErrorCode::io_error, "cannot create output directory '" + directory + "': " + ec.message());
    }
    const std::string stem = "credreg_" + report.config_hash;
    const fs::path csv = fs::path(directory) / (stem + ".csv");
    const fs::path json = fs::path(directory) / (stem + ".json");
    write_file(csv, report_csv(report));
    write_file(json, report_json(report));
    return ReportFiles{csv.string(), json.string()};
}

std::vector<ReportRow> parse_report_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kReportHeader) {
        fail(ErrorCode::invalid_argument, "CSV header does not match the report layout");
    }
    std::vector<ReportRow> rows;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty()) {
            continue;
        }
        std::array<double, kColumns> values{};
        std::istringstream cells(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(cells, cell, ',')) {
            require(c < kColumns, ErrorCode::invalid_argument,
                    "CSV line " + std::to_string(line_number) + " has too many cells");
            if (cell == "NA") {
                values[c] = std::numeric_limits<double>::quiet_NaN();
            } else {
                char *end = nullptr;
                values[c] = std::strtod(cell.c_str(), &end);
                require(!cell.empty() && end == cell.c_str() + cell.size(), ErrorCode::invalid_argument,
                        "CSV line " + std::to_string(line_number) + " has a malformed cell '" + cell + "'");
            }
            ++c;
        }
        require(c == kColumns, ErrorCode::invalid_argument,
                "CSV line " + std::to_string(line_number) + " has " + std::to_string(c) + " cells");
        rows.push_back(row_from_values(values));
    }
    return rows;
}

} // namespace credreg
