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
#include <span>

#include <Eigen/Core>

namespace potr {

inline constexpr double kShC0 = 0.28209479177387814;

/// Position of the basis with degree l and order m: l(l+1)+m+1 (1-based).
constexpr int sh_index(int l, int m) { return l * (l + 1) + m + 1; }

/// Real orthonormal spherical harmonics up to degree 3 at unit direction d,
/// 0-based: element i holds basis index i+1. Sign convention follows the
/// reference splatting renderer so that stored coefficients stay compatible.
std::array<double, 16> sh_basis_all(const Eigen::Vector3d& d);

/// Single basis value, `index` in 1..16.
double sh_basis_eval(int index, const Eigen::Vector3d& d);

/// C(d) = sum_i L_i Y_i(d) for one color channel. No offset and no clamp.
double eval_sh_color(std::span<const float, 16> coeffs, const Eigen::Vector3d& d);
double eval_sh_color(std::span<const double, 16> coeffs, const Eigen::Vector3d& d);

} // namespace potr
