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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "potr/scene.hpp"

namespace potr {

/// Parses a binary little-endian PLY in the reference splat layout
/// (x,y,z, f_dc_0..2, f_rest_0..44, opacity, scale_0..2, rot_0..3).
/// Extra properties (e.g. normals) are skipped. f_rest is channel-major:
/// f_rest_{c*15 + j} is AC coefficient j+1 of channel c.
std::vector<RawSplat> parse_ply(std::span<const std::uint8_t> bytes);

/// Writes the reference layout, including zeroed nx,ny,nz.
std::vector<std::uint8_t> export_ply(const std::vector<RawSplat>& splats);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

/// Writes through a temporary sibling and renames, so readers never see partial output.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

std::vector<Splat> load_ply(const std::filesystem::path& path);
void save_ply(const std::filesystem::path& path, const std::vector<Splat>& splats);

} // namespace potr
