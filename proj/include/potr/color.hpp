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

#include <array>

namespace potr {

using Color3 = std::array<double, 3>;

/// Y = R/4 + G/2 + B/4, Co = (R - B)/2, Cg = -R/4 + G/2 - B/4.
/// Linear, so it applies to SH coefficient vectors as well as colors.
constexpr Color3 rgb_to_ycocg(const Color3& c) {
    return {0.25 * c[0] + 0.5 * c[1] + 0.25 * c[2], 0.5 * (c[0] - c[2]), -0.25 * c[0] + 0.5 * c[1] - 0.25 * c[2]};
}

constexpr Color3 ycocg_to_rgb(const Color3& c) {
    return {c[0] + c[1] - c[2], c[0] + c[2], c[0] - c[1] - c[2]};
}

} // namespace potr
