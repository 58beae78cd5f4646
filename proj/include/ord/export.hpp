// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>

#include "ord/grid.hpp"

namespace ord {

/// Label id -> RGB for point exports. The defaults are a documented
/// arbitrary palette, one distinct color per class.
struct Palette {
  std::array<std::array<std::uint8_t, 3>, 16> rgb{};

  static Palette defaults(LabelSpace space);
};

/// One colored vertex per non-empty voxel, at the voxel center, ASCII PLY.
void write_ply(const VoxelGrid& grid, std::ostream& out, const Palette& palette);

/// Atomic file variant (write-to-temp, rename).
void save_ply(const VoxelGrid& grid, const std::filesystem::path& path,
              const Palette& palette);

}  // namespace ord
