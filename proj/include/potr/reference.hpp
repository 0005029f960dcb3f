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

// Serial, untiled implementations of the rendering kernels. They share the
// per-fragment arithmetic with the OpenMP kernels but none of the tiling,
// binning or row scheduling, and are kept as the baseline for equivalence
// tests and benchmarks.

#include <span>

#include "potr/rasterizer.hpp"

namespace potr::reference {

RecordedView render_with_records(std::span<const Splat> splats, const Camera& camera);

/// Built from render_with_records() and prune_difference(), pixel by pixel.
ImpactReport compute_delta_mse(std::span<const Splat> splats, std::span<const Camera> cameras,
                               const TargetSet& targets);

} // namespace potr::reference
