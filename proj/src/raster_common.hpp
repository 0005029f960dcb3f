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

// Per-fragment arithmetic shared by the OpenMP kernels and the serial
// reference implementation, so both produce bit-identical values.

#include <algorithm>
#include <cmath>
#include <vector>

#include "potr/rasterizer.hpp"

namespace potr::detail {

/// Alpha of a projected splat at pixel (x, y), or 0 when it does not contribute.
inline double fragment_alpha(const Projected2D& p, int x, int y) {
    if (x < p.x_min || x > p.x_max || y < p.y_min || y > p.y_max) return 0.0;
    const double dx = (x + 0.5) - p.mean.x();
    const double dy = (y + 0.5) - p.mean.y();
    const double power = -0.5 * (p.conic[0] * dx * dx + p.conic[2] * dy * dy) - p.conic[1] * dx * dy;
    if (power > 0.0) return 0.0;
    const double alpha = std::min(kMaxAlpha, p.opacity * std::exp(power));
    return alpha < kMinAlpha ? 0.0 : alpha;
}

/// Front-to-back compositing over a black background. `candidates` must be
/// depth sorted; `out` receives the composited contributions.
template <typename Range>
Color3 composite_pixel(const Range& candidates, int x, int y, std::vector<Contribution>& out) {
    out.clear();
    Color3 c{0.0, 0.0, 0.0};
    double t = 1.0;
    for (const Projected2D& p : candidates) {
        const double alpha = fragment_alpha(p, x, y);
        if (alpha == 0.0) continue;
        const double w = t * alpha;
        for (int ch = 0; ch < 3; ++ch) c[ch] += w * p.color[ch];
        out.push_back({p.splat_id, alpha, t, p.color});
        t *= (1.0 - alpha);
        if (t < kTransmittanceCutoff) break;
    }
    return c;
}

/// PD for the contribution at rank i, with partial colors P_i and P_{i+1}
/// and final color P_K: P_i - P_{i+1}/(1-a) + a P_K/(1-a).
inline Color3 prune_difference_at(const Color3& p_i, const Color3& p_next, const Color3& p_final, double alpha) {
    const double inv = 1.0 / (1.0 - alpha);
    Color3 pd{};
    for (int ch = 0; ch < 3; ++ch) pd[ch] = p_i[ch] - inv * p_next[ch] + alpha * inv * p_final[ch];
    return pd;
}

/// Sum over channels of PD^2 + 2 PD (c - c_t).
inline double delta_squared_error(const Color3& pd, const Color3& color, const double* target) {
    double s = 0.0;
    for (int ch = 0; ch < 3; ++ch) s += pd[ch] * pd[ch] + 2.0 * pd[ch] * (color[ch] - target[ch]);
    return s;
}

inline bool depth_less(const Projected2D& a, const Projected2D& b) {
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.splat_id < b.splat_id;
}

} // namespace potr::detail
