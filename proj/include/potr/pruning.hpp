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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "potr/rasterizer.hpp"
#include "potr/scene.hpp"

namespace potr {

struct PruneConfig {
    double max_delta_mse = 1.5848931924611143e-10;  // 10^(-9.8), the q = 0.5 value
    double a = 10.0;
    int iterations = 48;

    void validate() const;
};

struct PruneIterationReport {
    int iteration = 0;  // 1-based
    double budget = 0.0;
    std::vector<std::uint32_t> removed;  // ids in the original (unpruned) numbering
    double removed_importance = 0.0;
    double cumulative_removed_importance = 0.0;
    std::size_t count_before = 0;
    std::size_t count_after = 0;
    std::size_t eligible = 0;
    double mse = 0.0;  // vs targets, measured before this iteration's removal

    [[nodiscard]] std::string to_json_line() const;
};

/// m(x) = x for x >= 0, (sqrt(1 - 2 a x) - 1) / a otherwise. Not monotone:
/// it falls to 0 at x = 0 from both sides, and a sets how much a negative
/// dMSE is favored over a small positive one.
double mapping_m(double x, double a);

/// (1 / remaining) * sum of I_k over splats with dMSE_k < max_delta_mse.
double compute_budget(std::span<const double> delta_mse, std::span<const double> importance,
                      double max_delta_mse, int remaining_iterations);

/// Candidates (dMSE < max) in ascending m(dMSE / max), ties by index, added
/// until their importance reaches the budget; the crossing splat is included.
/// Zero-importance candidates never consume budget and are always included.
std::vector<std::uint32_t> select_removal_set(std::span<const double> delta_mse, std::span<const double> importance,
                                              double budget, double max_delta_mse, double a);

/// Iterative pruning against fixed targets. Holds the working splat list and
/// the original ids of the survivors; each step recomputes dMSE and importance.
class PruningController {
public:
    PruningController(std::vector<Splat> splats, std::span<const Camera> cameras, const TargetSet& targets,
                      PruneConfig config);

    /// Runs iteration `next_iteration()`. Returns nullopt once finished.
    std::optional<PruneIterationReport> step();

    /// Runs steps until done, or until `stop_after` iterations have completed.
    void run(std::optional<int> stop_after = std::nullopt);

    [[nodiscard]] bool finished() const { return finished_; }
    [[nodiscard]] int next_iteration() const { return iteration_ + 1; }
    [[nodiscard]] const std::vector<Splat>& splats() const { return splats_; }
    /// Swaps in modified splats (same count and order), e.g. after compaction.
    void replace_splats(std::vector<Splat> splats);
    [[nodiscard]] const std::vector<std::uint32_t>& surviving_ids() const { return ids_; }
    [[nodiscard]] const std::vector<PruneIterationReport>& reports() const { return reports_; }

private:
    std::vector<Splat> splats_;
    std::vector<std::uint32_t> ids_;
    std::span<const Camera> cameras_;
    const TargetSet& targets_;
    PruneConfig config_;
    int iteration_ = 0;
    bool finished_ = false;
    double cumulative_importance_ = 0.0;
    std::optional<ImpactReport> cached_;  // valid while the splats are unchanged
    std::vector<PruneIterationReport> reports_;
};

struct PruneResult {
    std::vector<Splat> splats;
    std::vector<std::uint32_t> surviving_ids;
    std::vector<PruneIterationReport> reports;
};

PruneResult run_pruning(std::vector<Splat> splats, std::span<const Camera> cameras, const TargetSet& targets,
                        const PruneConfig& config);

/// Baseline: drop the `remove_count` splats with the lowest importance on the
/// given splats, in one shot (ties by index).
std::vector<Splat> prune_by_importance(std::span<const Splat> splats, std::span<const Camera> cameras,
                                       std::size_t remove_count);

/// Same controller, but each iteration's eligible set is the `count - target`
/// splats with the lowest m(dMSE / max_delta_mse) instead of a fixed
/// threshold, so the run ends at exactly `target_count` splats. Used to
/// compare strategies at equal size.
PruneResult run_pruning_to_count(std::vector<Splat> splats, std::span<const Camera> cameras,
                                 const TargetSet& targets, std::size_t target_count, const PruneConfig& config);

/// Removes the listed positions (indices into `splats`) in place, preserving order.
void erase_indices(std::vector<Splat>& splats, std::vector<std::uint32_t>& ids, std::span<const std::uint32_t> drop);

} // namespace potr
