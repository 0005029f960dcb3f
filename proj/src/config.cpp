// Copyright 2026 The potr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "potr/config.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "potr/errors.hpp"

namespace potr {

namespace {

double parse_double(std::string_view key, std::string_view value) {
    try {
        std::size_t used = 0;
        const std::string s(value);
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ArgumentError("override " + std::string(key) + ": '" + std::string(value) + "' is not a number");
    }
}

int parse_int(std::string_view key, std::string_view value) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ArgumentError("override " + std::string(key) + ": '" + std::string(value) + "' is not an integer");
    }
    return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "1" || value == "true" || value == "on") return true;
    if (value == "0" || value == "false" || value == "off") return false;
    throw ArgumentError("override " + std::string(key) + ": expected true/false");
}

} // namespace

EncodeConfig config_from_q(double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("q must be in [0, 1]");
    EncodeConfig c;
    c.q = q;
    c.lambda = std::pow(10.0, -q);
    c.alpha_par = 1.0 / (1.0 + std::exp(-3.0 * q));
    c.max_delta_mse = std::pow(10.0, -8.8 - 2.0 * q);
    c.beta = 1.4e-4 * q;
    c.gamma = 5.0 * std::pow(10.0, -3.0 - 5.0 * q);
    c.sf_sh = 1.0 + 100.0 * q;
    c.sf_opacity = 1.0 + 200.0 * q;
    c.sf_rotation = 1.0 + 400.0 * q;
    c.sf_scale = 1.0 + 4000.0 * q;
    c.iterations = 48;
    return c;
}

void EncodeConfig::set(std::string_view key, std::string_view value) {
    if (key == "lambda") lambda = parse_double(key, value);
    else if (key == "alpha_par") alpha_par = parse_double(key, value);
    else if (key == "max_delta_mse") max_delta_mse = parse_double(key, value);
    else if (key == "beta") beta = parse_double(key, value);
    else if (key == "gamma") gamma = parse_double(key, value);
    else if (key == "sf_sh") sf_sh = parse_double(key, value);
    else if (key == "sf_opacity") sf_opacity = parse_double(key, value);
    else if (key == "sf_rotation") sf_rotation = parse_double(key, value);
    else if (key == "sf_scale") sf_scale = parse_double(key, value);
    else if (key == "iterations") iterations = parse_int(key, value);
    else if (key == "chroma_factor") chroma_factor = parse_double(key, value);
    else if (key == "mapping_a") mapping_a = parse_double(key, value);
    else if (key == "zstd_level") zstd_level = parse_int(key, value);
    else if (key == "max_depth") max_depth = parse_int(key, value);
    else if (key == "interleave_at") interleave_at = parse_int(key, value);
    else if (key == "prune") prune = parse_bool(key, value);
    else if (key == "compact") compact = parse_bool(key, value);
    else if (key == "placement") {
        if (value == "after") placement = CompactionPlacement::after_pruning;
        else if (value == "interleaved") placement = CompactionPlacement::interleaved;
        else throw ArgumentError("placement must be 'after' or 'interleaved'");
    } else {
        throw ArgumentError("unknown override key '" + std::string(key) + "'");
    }
}

void EncodeConfig::apply_override(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ArgumentError("override must look like key=value, got '" + std::string(assignment) + "'");
    }
    set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void EncodeConfig::validate() const {
    if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("q must be in [0, 1]");
    prune_config().validate();
    compaction_config().validate();
    encode_params().sf.validate();
    if (!(beta >= 0.0)) throw ArgumentError("beta must be >= 0");
    if (!(gamma > 0.0)) throw ArgumentError("gamma must be > 0");
    if (zstd_level < 1 || zstd_level > 22) throw ArgumentError("zstd level must be in [1, 22]");
    if (max_depth < 0 || max_depth > 32) throw ArgumentError("max_depth must be in [0, 32]");
    if (placement == CompactionPlacement::interleaved && (interleave_at < 1 || interleave_at >= iterations)) {
        throw ArgumentError("interleave_at must be in [1, iterations)");
    }
}

PruneConfig EncodeConfig::prune_config() const { return {max_delta_mse, mapping_a, iterations}; }

CompactionConfig EncodeConfig::compaction_config() const {
    CompactionConfig c;
    c.lambda = lambda;
    c.chroma_factor = chroma_factor;
    c.parallel_threshold = alpha_par;
    c.zero_threshold = 0.5 / static_cast<float>(sf_sh);
    return c;
}

EncodeParams EncodeConfig::encode_params() const {
    EncodeParams p;
    p.q = static_cast<float>(q);
    p.sf = {static_cast<float>(sf_sh), static_cast<float>(sf_opacity), static_cast<float>(sf_rotation),
            static_cast<float>(sf_scale)};
    p.beta = static_cast<float>(beta);
    p.gamma = static_cast<float>(gamma);
    p.max_depth = max_depth;
    return p;
}

nlohmann::json EncodeConfig::to_json() const {
    return {{"q", q},
            {"lambda", lambda},
            {"alpha_par", alpha_par},
            {"max_delta_mse", max_delta_mse},
            {"beta", beta},
            {"gamma", gamma},
            {"sf_sh", sf_sh},
            {"sf_opacity", sf_opacity},
            {"sf_rotation", sf_rotation},
            {"sf_scale", sf_scale},
            {"iterations", iterations},
            {"chroma_factor", chroma_factor},
            {"mapping_a", mapping_a},
            {"zstd_level", zstd_level},
            {"max_depth", max_depth},
            {"placement", placement == CompactionPlacement::interleaved ? "interleaved" : "after"},
            {"interleave_at", interleave_at},
            {"prune", prune},
            {"compact", compact}};
}

} // namespace potr
