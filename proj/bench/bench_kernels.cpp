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

// Serial reference kernels vs the tiled OpenMP kernels on the default fixture.
//
//   potr_bench --benchmark_filter=DeltaMse
//
// Set OMP_NUM_THREADS to compare thread counts.

#include <benchmark/benchmark.h>

#include "potr/fixture.hpp"
#include "potr/rasterizer.hpp"
#include "potr/reference.hpp"

namespace {

struct BenchScene {
    potr::Scene scene;
    potr::TargetSet targets;
};

const BenchScene& bench_scene() {
    static const BenchScene s = [] {
        potr::FixtureConfig cfg;
        cfg.cameras = 4;
        BenchScene out{potr::make_fixture(cfg), {}};
        out.targets = potr::render_all(out.scene.splats, out.scene.cameras);
        return out;
    }();
    return s;
}

void BM_RecordsSerial(benchmark::State& state) {
    const auto& s = bench_scene();
    for (auto _ : state) {
        benchmark::DoNotOptimize(potr::reference::render_with_records(s.scene.splats, s.scene.cameras[0]));
    }
}

void BM_RecordsParallel(benchmark::State& state) {
    const auto& s = bench_scene();
    for (auto _ : state) {
        benchmark::DoNotOptimize(potr::render_with_records(s.scene.splats, s.scene.cameras[0]));
    }
}

void BM_DeltaMseSerial(benchmark::State& state) {
    const auto& s = bench_scene();
    for (auto _ : state) {
        benchmark::DoNotOptimize(potr::reference::compute_delta_mse(s.scene.splats, s.scene.cameras, s.targets));
    }
}

void BM_DeltaMseParallel(benchmark::State& state) {
    const auto& s = bench_scene();
    for (auto _ : state) {
        benchmark::DoNotOptimize(potr::compute_delta_mse(s.scene.splats, s.scene.cameras, s.targets));
    }
}

BENCHMARK(BM_RecordsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecordsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeltaMseSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DeltaMseParallel)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
