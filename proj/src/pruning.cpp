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

#include "potr/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"

#include "potr/errors.hpp"

namespace potr {

void PruneConfig::validate() const {
    if (!(max_delta_mse > 0.0)) throw ArgumentError("max_delta_mse must be > 0");
    if (!(a > 0.0)) throw ArgumentError("mapping parameter a must be > 0");
    if (iterations < 1) throw ArgumentError("pruning iterations must be >= 1");
}

std::string PruneIterationReport::to_json_line() const {
    nlohmann::json j;
    j["iteration"] = iteration;
    j["budget"] = budget;
    j["eligible"] = eligible;
    j["removed"] = removed.size();
    j["removed_importance"] = removed_importance;
    j["cumulative_removed_importance"] = cumulative_removed_importance;
    j["count_before"] = count_before;
    j["count_after"] = count_after;
    j["mse"] = mse;
    return j.dump();
}

double mapping_m(double x, double a) {
    if (x >= 0.0) return x;
    return (std::sqrt(1.0 - 2.0 * a * x) - 1.0) / a;
}

double compute_budget(std::span<const double> delta_mse, std::span<const double> importance, double max_delta_mse,
                      int remaining_iterations) {
    if (remaining_iterations < 1) throw ArgumentError("remaining_iterations must be >= 1");
    double eligible = 0.0;
    for (std::size_t k = 0; k < delta_mse.size(); ++k) {
        if (delta_mse[k] < max_delta_mse) eligible += importance[k];
    }
    return eligible / remaining_iterations;
}

namespace {

/// Shared selection loop over an already ordered candidate list.
std::vector<std::uint32_t> take_until_budget(std::span<const std::uint32_t> ordered,
                                             std::span<const double> importance, double budget) {
    std::vector<std::uint32_t> chosen;
    if (ordered.empty()) return chosen;
    double sum = 0.0;
    for (std::uint32_t k : ordered) {
        if (sum < budget) {
            chosen.push_back(k);
            sum += importance[k];
        } else if (importance[k] == 0.0) {
            chosen.push_back(k);
        }
    }
    return chosen;
}

} // namespace

std::vector<std::uint32_t> select_removal_set(std::span<const double> delta_mse, std::span<const double> importance,
                                              double budget, double max_delta_mse, double a) {
    std::vector<std::uint32_t> candidates;
    std::vector<double> score(delta_mse.size(), 0.0);
    for (std::size_t k = 0; k < delta_mse.size(); ++k) {
        if (delta_mse[k] < max_delta_mse) {
            candidates.push_back(static_cast<std::uint32_t>(k));
            score[k] = mapping_m(delta_mse[k] / max_delta_mse, a);
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::uint32_t l, std::uint32_t r) { return score[l] < score[r]; });
    return take_until_budget(candidates, importance, budget);
}

void erase_indices(std::vector<Splat>& splats, std::vector<std::uint32_t>& ids, std::span<const std::uint32_t> drop) {
    std::vector<char> dead(splats.size(), 0);
    for (std::uint32_t k : drop) dead[k] = 1;
    std::size_t w = 0;
    for (std::size_t r = 0; r < splats.size(); ++r) {
        if (dead[r]) continue;
        splats[w] = splats[r];
        ids[w] = ids[r];
        ++w;
    }
    splats.resize(w);
    ids.resize(w);
}

PruningController::PruningController(std::vector<Splat> splats, std::span<const Camera> cameras,
                                     const TargetSet& targets, PruneConfig config)
    : splats_(std::move(splats)), cameras_(cameras), targets_(targets), config_(config) {
    config_.validate();
    ids_.resize(splats_.size());
    std::iota(ids_.begin(), ids_.end(), 0u);
}

std::optional<PruneIterationReport> PruningController::step() {
    if (finished_) return std::nullopt;
    ++iteration_;
    const int remaining = config_.iterations - iteration_ + 1;

    // An iteration that removed nothing leaves the inputs, and so the
    // analysis, unchanged.
    if (!cached_) cached_ = compute_delta_mse(splats_, cameras_, targets_);
    const ImpactReport& impact = *cached_;
    PruneIterationReport rep;
    rep.iteration = iteration_;
    rep.count_before = splats_.size();
    rep.mse = impact.mse;
    rep.budget = compute_budget(impact.delta_mse, impact.importance, config_.max_delta_mse, remaining);
    rep.eligible = static_cast<std::size_t>(std::count_if(impact.delta_mse.begin(), impact.delta_mse.end(),
                                                          [&](double d) { return d < config_.max_delta_mse; }));

    // The last iteration takes the whole eligible mass; an infinite budget
    // keeps rounding in the running sum from leaving a straggler behind.
    const double budget = remaining == 1 ? std::numeric_limits<double>::infinity() : rep.budget;
    const auto chosen =
        select_removal_set(impact.delta_mse, impact.importance, budget, config_.max_delta_mse, config_.a);
    for (std::uint32_t k : chosen) {
        rep.removed.push_back(ids_[k]);
        rep.removed_importance += impact.importance[k];
    }
    cumulative_importance_ += rep.removed_importance;
    rep.cumulative_removed_importance = cumulative_importance_;
    rep.count_after = splats_.size() - chosen.size();
    if (!chosen.empty()) {
        erase_indices(splats_, ids_, chosen);
        cached_.reset();
    }

    if (iteration_ >= config_.iterations) finished_ = true;
    reports_.push_back(rep);
    return rep;
}

void PruningController::replace_splats(std::vector<Splat> splats) {
    if (splats.size() != splats_.size()) throw ArgumentError("replacement splats must keep the count");
    splats_ = std::move(splats);
    cached_.reset();
}

void PruningController::run(std::optional<int> stop_after) {
    while (!finished_) {
        if (stop_after && iteration_ >= *stop_after) break;
        step();
    }
}

PruneResult run_pruning(std::vector<Splat> splats, std::span<const Camera> cameras, const TargetSet& targets,
                        const PruneConfig& config) {
    PruningController controller(std::move(splats), cameras, targets, config);
    controller.run();
    return {controller.splats(), controller.surviving_ids(), controller.reports()};
}

std::vector<Splat> prune_by_importance(std::span<const Splat> splats, std::span<const Camera> cameras,
                                       std::size_t remove_count) {
    const ImpactReport impact = compute_importance(splats, cameras);
    std::vector<std::uint32_t> order(splats.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t l, std::uint32_t r) { return impact.importance[l] < impact.importance[r]; });
    order.resize(std::min(remove_count, order.size()));
    std::vector<Splat> out(splats.begin(), splats.end());
    std::vector<std::uint32_t> ids(out.size());
    erase_indices(out, ids, order);
    return out;
}

PruneResult run_pruning_to_count(std::vector<Splat> splats, std::span<const Camera> cameras,
                                 const TargetSet& targets, std::size_t target_count, const PruneConfig& config) {
    config.validate();
    const int iterations = config.iterations;
    PruneResult result;
    result.surviving_ids.resize(splats.size());
    std::iota(result.surviving_ids.begin(), result.surviving_ids.end(), 0u);
    double cumulative = 0.0;

    for (int t = 1; t <= iterations && splats.size() > target_count; ++t) {
        const int remaining = iterations - t + 1;
        const ImpactReport impact = compute_delta_mse(splats, cameras, targets);
        const std::size_t excess = splats.size() - target_count;

        std::vector<double> score(splats.size());
        for (std::size_t k = 0; k < splats.size(); ++k) {
            score[k] = mapping_m(impact.delta_mse[k] / config.max_delta_mse, config.a);
        }
        std::vector<std::uint32_t> order(splats.size());
        std::iota(order.begin(), order.end(), 0u);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::uint32_t l, std::uint32_t r) { return score[l] < score[r]; });
        order.resize(excess);

        PruneIterationReport rep;
        rep.iteration = t;
        rep.count_before = splats.size();
        rep.eligible = excess;
        rep.mse = impact.mse;
        for (std::uint32_t k : order) rep.budget += impact.importance[k];
        rep.budget /= remaining;

        const double budget = remaining == 1 ? std::numeric_limits<double>::infinity() : rep.budget;
        const auto chosen = take_until_budget(order, impact.importance, budget);
        for (std::uint32_t k : chosen) {
            rep.removed.push_back(result.surviving_ids[k]);
            rep.removed_importance += impact.importance[k];
        }
        erase_indices(splats, result.surviving_ids, chosen);
        cumulative += rep.removed_importance;
        rep.cumulative_removed_importance = cumulative;
        rep.count_after = splats.size();
        result.reports.push_back(std::move(rep));
    }
    result.splats = std::move(splats);
    return result;
}

} // namespace potr
