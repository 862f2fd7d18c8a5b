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
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "credreg/error.hpp"
#include "credreg/pipeline.hpp"

namespace credreg {

namespace {

[[noreturn]] void config_error(const std::string &key, const std::string &message) {
    fail(ErrorCode::invalid_config, "config key '" + key + "': " + message);
}

std::string trim(const std::string &text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = text.find_last_not_of(" \t\r\n");
    return text.substr(first, last - first + 1);
}

template <typename T> T parse_integer(const std::string &key, const std::string &value) {
    T out{};
    const char *begin = value.data();
    const char *end = begin + value.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc{} || ptr != end) {
        config_error(key, "expected an integer, got '" + value + "'");
    }
    return out;
}

double parse_double(const std::string &key, const std::string &value) {
    try {
        std::size_t used = 0;
        const double out = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(out)) {
            config_error(key, "expected a finite number, got '" + value + "'");
        }
        return out;
    } catch (const std::logic_error &) {
        config_error(key, "expected a finite number, got '" + value + "'");
    }
}

bool parse_bool(const std::string &key, const std::string &value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no" || value == "off") {
        return false;
    }
    config_error(key, "expected a boolean, got '" + value + "'");
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

struct Field {
    std::function<void(ExperimentConfig &, const std::string &)> set;
    std::function<std::string(const ExperimentConfig &)> get;
};

#define CREDREG_INT_FIELD(name, type)                                                                                \
    {                                                                                                                \
        #name, Field {                                                                                               \
            [](ExperimentConfig &c, const std::string &v) { c.name = parse_integer<type>(#name, v); },             \
                [](const ExperimentConfig &c) { return std::to_string(c.name); }                                    \
        }                                                                                                            \
    }
#define CREDREG_DOUBLE_FIELD(name)                                                                                   \
    {                                                                                                                \
        #name, Field {                                                                                               \
            [](ExperimentConfig &c, const std::string &v) { c.name = parse_double(#name, v); },                    \
                [](const ExperimentConfig &c) { return format_double(c.name); }                                     \
        }                                                                                                            \
    }
#define CREDREG_BOOL_FIELD(name)                                                                                     \
    {                                                                                                                \
        #name, Field {                                                                                               \
            [](ExperimentConfig &c, const std::string &v) { c.name = parse_bool(#name, v); },                      \
                [](const ExperimentConfig &c) { return std::string(c.name ? "true" : "false"); }                    \
        }                                                                                                            \
    }
#define CREDREG_STRING_FIELD(name)                                                                                   \
    {                                                                                                                \
        #name, Field {                                                                                               \
            [](ExperimentConfig &c, const std::string &v) { c.name = v; },                                          \
                [](const ExperimentConfig &c) { return c.name; }                                                    \
        }                                                                                                            \
    }

const std::map<std::string, Field> &fields() {
    static const std::map<std::string, Field> table = {
        CREDREG_INT_FIELD(dimension, int),
        CREDREG_INT_FIELD(outcomes, int),
        CREDREG_INT_FIELD(copies, std::int64_t),
        CREDREG_INT_FIELD(rank, int),
        CREDREG_DOUBLE_FIELD(state_mix),
        CREDREG_STRING_FIELD(prior),
        CREDREG_DOUBLE_FIELD(prior_scale),
        CREDREG_STRING_FIELD(grid),
        CREDREG_DOUBLE_FIELD(grid_min),
        CREDREG_STRING_FIELD(scheme),
        CREDREG_INT_FIELD(samples, int),
        CREDREG_INT_FIELD(baseline_samples, std::int64_t),
        CREDREG_INT_FIELD(seed, std::uint64_t),
        {"mode", Field{[](ExperimentConfig &c, const std::string &v) { c.mode = parse_mode(v); },
                       [](const ExperimentConfig &c) { return mode_string(c.mode); }}},
        CREDREG_STRING_FIELD(out),
        CREDREG_DOUBLE_FIELD(inflation),
        CREDREG_INT_FIELD(burn_in, int),
        CREDREG_INT_FIELD(thinning, int),
        CREDREG_BOOL_FIELD(keep_bures_quadratic),
        CREDREG_INT_FIELD(ml_max_iters, int),
        CREDREG_DOUBLE_FIELD(ml_tolerance),
        CREDREG_DOUBLE_FIELD(calibration_lambda),
        CREDREG_DOUBLE_FIELD(calibration_prior_scale),
        CREDREG_INT_FIELD(calibration_samples, int),
        CREDREG_INT_FIELD(calibration_thinning, int),
        CREDREG_DOUBLE_FIELD(correlation_lambda),
        CREDREG_INT_FIELD(correlation_steps, int),
        CREDREG_INT_FIELD(correlation_pairs, int),
        CREDREG_BOOL_FIELD(record_timings),
    };
    return table;
}

#undef CREDREG_INT_FIELD
#undef CREDREG_DOUBLE_FIELD
#undef CREDREG_BOOL_FIELD
#undef CREDREG_STRING_FIELD

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

} // namespace

int ExperimentConfig::resolved_outcomes() const { return outcomes > 0 ? outcomes : dimension * dimension * dimension; }

std::int64_t ExperimentConfig::resolved_copies() const {
    return copies > 0 ? copies : static_cast<std::int64_t>(500) * resolved_outcomes();
}

int ExperimentConfig::resolved_rank() const { return rank > 0 ? rank : dimension; }

std::string mode_string(const ModeFlags &mode) {
    std::string out;
    const auto add = [&out](bool on, const char *name) {
        if (on) {
            out += out.empty() ? "" : ",";
            out += name;
        }
    };
    add(mode.in_region, "in-region");
    add(mode.analytic, "analytic");
    add(mode.baseline, "baseline");
    add(mode.calibration, "calibration");
    add(mode.correlation, "correlation");
    return out;
}

ModeFlags parse_mode(const std::string &text) {
    ModeFlags mode{false, false, false, false, false};
    std::stringstream stream(text);
    std::string item;
    bool any = false;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        any = true;
        if (item == "in-region" || item == "in_region") {
            mode.in_region = true;
        } else if (item == "analytic") {
            mode.analytic = true;
        } else if (item == "baseline") {
            mode.baseline = true;
        } else if (item == "calibration") {
            mode.calibration = true;
        } else if (item == "correlation") {
            mode.correlation = true;
        } else if (item == "all") {
            mode = ModeFlags{true, true, true, true, true};
        } else {
            config_error("mode", "unknown mode '" + item + "'");
        }
    }
    if (!any) {
        config_error("mode", "at least one mode is required");
    }
    return mode;
}

void apply_setting(ExperimentConfig &config, const std::string &key, const std::string &value) {
    const std::string name = normalize_key(trim(key));
    const auto it = fields().find(name);
    if (it == fields().end()) {
        config_error(name, "unknown key");
    }
    it->second.set(config, trim(value));
}

std::string get_setting(const ExperimentConfig &config, const std::string &key) {
    const std::string name = normalize_key(trim(key));
    const auto it = fields().find(name);
    if (it == fields().end()) {
        config_error(name, "unknown key");
    }
    return it->second.get(config);
}

std::vector<std::string> setting_keys() {
    std::vector<std::string> keys;
    for (const auto &[name, field] : fields()) {
        keys.push_back(name);
    }
    return keys;
}

ExperimentConfig parse_config_text(const std::string &text, ExperimentConfig base) {
    std::stringstream stream(text);
    std::string line;
    int line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        std::string content;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"') {
                quoted = !quoted;
            } else if (ch == '#' && !quoted) {
                break;
            }
            content += ch;
        }
        content = trim(content);
        if (content.empty()) {
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            fail(ErrorCode::invalid_config, "config line " + std::to_string(line_number) + ": expected key = value");
        }
        const std::string key = trim(content.substr(0, eq));
        std::string value = trim(content.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = value.substr(1, value.size() - 2);
        }
        apply_setting(base, key, value);
    }
    return base;
}

ExperimentConfig load_config_file(const std::string &path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::io_error, "cannot open config file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), std::move(base));
}

void validate_config(const ExperimentConfig &config) {
    if (config.dimension < 2 || config.dimension > 16) {
        config_error("dimension", "must lie in [2, 16]");
    }
    const int D = config.dimension;
    if (config.outcomes < 0) {
        config_error("outcomes", "must be nonnegative");
    }
    if (config.resolved_outcomes() < D * D) {
        config_error("outcomes", "at least D^2 = " + std::to_string(D * D) + " outcomes are needed");
    }
    if (config.copies < 0) {
        config_error("copies", "must be nonnegative");
    }
    if (config.rank < 0 || config.rank > D) {
        config_error("rank", "must lie in [0, D]");
    }
    if (!(config.state_mix >= 0.0 && config.state_mix <= 1.0)) {
        config_error("state_mix", "must lie in [0, 1]");
    }
    if (config.prior != "uniform" && config.prior != "gaussian") {
        config_error("prior", "must be 'uniform' or 'gaussian'");
    }
    if (!(config.prior_scale > 0.0)) {
        config_error("prior_scale", "must be positive");
    }
    {
        const auto colon = config.grid.find(':');
        if (colon == std::string::npos) {
            config_error("grid", "expected <log|linear|hybrid>:<points>");
        }
        const std::string kind = config.grid.substr(0, colon);
        if (kind != "log" && kind != "linear" && kind != "hybrid") {
            config_error("grid", "unknown spacing '" + kind + "'");
        }
        const int points = parse_integer<int>("grid", config.grid.substr(colon + 1));
        if (points < 2) {
            config_error("grid", "needs at least 2 points");
        }
    }
    if (!(config.grid_min == 0.0 || (config.grid_min >= 1e-300 && config.grid_min < 1.0))) {
        config_error("grid_min", "must be 0 (automatic) or lie in [1e-300, 1)");
    }
    if (config.scheme != "trapezoid" && config.scheme != "forward") {
        config_error("scheme", "must be 'trapezoid' or 'forward'");
    }
    if (config.samples < 100) {
        config_error("samples", "must be at least 100");
    }
    if (config.mode.baseline) {
        if (config.baseline_samples < 1) {
            config_error("baseline_samples", "must be positive");
        }
        if (D > 3) {
            config_error("mode", "baseline filtering is limited to D <= 3");
        }
        if (config.prior != "uniform") {
            config_error("mode", "baseline filtering assumes the uniform prior");
        }
    }
    if (!(config.inflation >= 1.0 && config.inflation <= 2.0)) {
        config_error("inflation", "must lie in [1, 2]");
    }
    if (config.burn_in < 0) {
        config_error("burn_in", "must be nonnegative");
    }
    if (config.thinning < 1) {
        config_error("thinning", "must be at least 1");
    }
    if (config.ml_max_iters < 1) {
        config_error("ml_max_iters", "must be positive");
    }
    if (!(config.ml_tolerance > 0.0)) {
        config_error("ml_tolerance", "must be positive");
    }
    if (!(config.calibration_lambda > 0.0 && config.calibration_lambda < 1.0)) {
        config_error("calibration_lambda", "must lie in (0, 1)");
    }
    if (!(config.calibration_prior_scale > 0.0)) {
        config_error("calibration_prior_scale", "must be positive");
    }
    if (config.calibration_samples < 100) {
        config_error("calibration_samples", "must be at least 100");
    }
    if (config.calibration_thinning < 1) {
        config_error("calibration_thinning", "must be at least 1");
    }
    if (!(config.correlation_lambda > 0.0 && config.correlation_lambda < 1.0)) {
        config_error("correlation_lambda", "must lie in (0, 1)");
    }
    if (config.correlation_steps < 2) {
        config_error("correlation_steps", "must be at least 2");
    }
    if (config.correlation_pairs < 1) {
        config_error("correlation_pairs", "must be positive");
    }
}

std::string canonical_config(const ExperimentConfig &config) {
    std::string out;
    for (const auto &[name, field] : fields()) {
        if (name == "out") {
            continue;
        }
        out += name;
        out += '=';
        out += field.get(config);
        out += '\n';
    }
    return out;
}

std::string config_hash(const ExperimentConfig &config) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_config(config)) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

} // namespace credreg
