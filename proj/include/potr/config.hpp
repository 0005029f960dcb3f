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

#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "potr/bitstream.hpp"
#include "potr/compaction.hpp"
#include "potr/pruning.hpp"

namespace potr {

enum class CompactionPlacement { after_pruning, interleaved };

/// Every encoder knob. config_from_q() fills the schedule; set() overrides one field.
struct EncodeConfig {
    double q = 0.5;
    double lambda = 0.0;          // luminance regularization
    double alpha_par = 0.0;       // parallel-column threshold
    double max_delta_mse = 0.0;   // pruning eligibility threshold
    double beta = 0.0;            // octree tolerance per unit of camera distance
    double gamma = 0.0;           // octree absolute tolerance
    double sf_sh = 1.0;
    double sf_opacity = 1.0;
    double sf_rotation = 1.0;
    double sf_scale = 1.0;
    int iterations = 48;
    double chroma_factor = 3.0;
    double mapping_a = 10.0;
    int zstd_level = kDefaultZstdLevel;
    int max_depth = kDefaultMaxDepth;
    CompactionPlacement placement = CompactionPlacement::after_pruning;
    int interleave_at = 24;
    bool prune = true;
    bool compact = true;

    /// `key` is a field name as in to_json(); throws ArgumentError on unknown keys or bad values.
    void set(std::string_view key, std::string_view value);
    /// Parses "key=value".
    void apply_override(std::string_view assignment);
    void validate() const;

    [[nodiscard]] PruneConfig prune_config() const;
    [[nodiscard]] CompactionConfig compaction_config() const;
    [[nodiscard]] EncodeParams encode_params() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Schedule: lambda = 10^-q, alpha = sigmoid(3q), max dMSE = 10^(-8.8-2q),
/// beta = 1.4e-4 q, gamma = 5 * 10^(-3-5q), SF_SH = 1+100q, SF_opacity = 1+200q,
/// SF_rotation = 1+400q, SF_scale = 1+4000q, 48 pruning iterations.
EncodeConfig config_from_q(double q);

} // namespace potr
