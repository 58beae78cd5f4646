// SPDX-License-Identifier: Apache-2.0
#include "ord/export.hpp"

#include <fstream>
#include <ostream>

#include "ord/errors.hpp"

namespace ord {

Palette Palette::defaults(LabelSpace space) {
  Palette p;
  if (space == LabelSpace::Semantic) {
    p.rgb[0] = {0, 0, 0};         // void
    p.rgb[1] = {0, 155, 0};       // grass
    p.rgb[2] = {0, 96, 0};        // tree
    p.rgb[3] = {128, 128, 128};   // hard-surface
    p.rgb[4] = {255, 192, 0};     // object
    p.rgb[5] = {0, 220, 128};     // bush
    p.rgb[6] = {0, 128, 255};     // water
    p.rgb[7] = {255, 0, 0};       // person
    p.rgb[8] = {128, 80, 0};      // mud
    p.rgb[9] = {160, 160, 120};   // rubble
    p.rgb[10] = {60, 60, 60};     // unknown
  } else {
    p.rgb[0] = {0, 0, 0};         // empty
    p.rgb[1] = {0, 200, 0};       // free
    p.rgb[2] = {255, 255, 0};     // low cost
    p.rgb[3] = {255, 128, 0};     // medium cost
    p.rgb[4] = {255, 0, 0};       // lethal
    p.rgb[5] = {60, 60, 60};      // unknown
  }
  return p;
}

void write_ply(const VoxelGrid& grid, std::ostream& out, const Palette& palette) {
  const GridConfig& cfg = grid.config;
  std::size_t count = 0;
  for (const std::uint8_t id : grid.labels) {
    if (id != 0) ++count;
  }
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << count << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";
  for (int ix = 0; ix < cfg.dims[0]; ++ix) {
    for (int iy = 0; iy < cfg.dims[1]; ++iy) {
      for (int iz = 0; iz < cfg.dims[2]; ++iz) {
        const std::uint8_t id = grid.at(ix, iy, iz);
        if (id == 0) continue;
        const auto c = cfg.index_to_center(ix, iy, iz);
        const auto& rgb = palette.rgb[id];
        out << static_cast<float>(c[0]) << ' ' << static_cast<float>(c[1]) << ' '
            << static_cast<float>(c[2]) << ' ' << static_cast<int>(rgb[0]) << ' '
            << static_cast<int>(rgb[1]) << ' ' << static_cast<int>(rgb[2]) << '\n';
      }
    }
  }
  if (!out) throw InputError("point export failed");
}

void save_ply(const VoxelGrid& grid, const std::filesystem::path& path,
              const Palette& palette) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw InputError("cannot open for write: " + tmp.string());
    write_ply(grid, out, palette);
  }
  fs::rename(tmp, path);
}

}  // namespace ord
