// SPDX-License-Identifier: Apache-2.0
#include "ord/grid_io.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ord {

namespace {

constexpr char kMagic[4] = {'O', 'R', 'D', 'G'};
constexpr std::uint16_t kVersion = 1;

void put_u16(std::ostream& out, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>(v >> 8)};
  out.write(reinterpret_cast<const char*>(b), 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f32(std::ostream& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

bool get_bytes(std::istream& in, void* dst, std::size_t n) {
  in.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount()) == n;
}

std::uint16_t u16_from(const unsigned char* b) {
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t u32_from(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

float f32_from(const unsigned char* b) {
  const std::uint32_t bits = u32_from(b);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

}  // namespace

const char* decode_error_name(DecodeErrorKind kind) {
  switch (kind) {
    case DecodeErrorKind::BadMagic: return "bad_magic";
    case DecodeErrorKind::BadVersion: return "bad_version";
    case DecodeErrorKind::BadHeader: return "bad_header";
    case DecodeErrorKind::TruncatedPayload: return "truncated_payload";
    case DecodeErrorKind::PayloadMismatch: return "payload_mismatch";
  }
  return "unknown";
}

void write_grid(const VoxelGrid& grid, std::ostream& out) {
  grid.config.validate();
  if (grid.labels.size() != grid.config.num_voxels()) {
    throw ConfigError("grid label array does not match dims product");
  }
  out.write(kMagic, 4);
  put_u16(out, kVersion);
  out.put(static_cast<char>(grid.space));
  out.put(0);  // reserved
  for (int a = 0; a < 3; ++a) put_u32(out, static_cast<std::uint32_t>(grid.config.dims[a]));
  put_f32(out, grid.config.voxel_size);
  for (int a = 0; a < 3; ++a) put_f32(out, grid.config.origin[a]);
  out.put(static_cast<char>(class_count(grid.space)));
  out.write(reinterpret_cast<const char*>(grid.labels.data()),
            static_cast<std::streamsize>(grid.labels.size()));
  if (!out) throw InputError("grid write failed");
}

VoxelGrid read_grid(std::istream& in) {
  unsigned char header[37];
  if (!get_bytes(in, header, 4)) {
    throw DecodeError(DecodeErrorKind::BadMagic, "stream too short for magic");
  }
  if (std::memcmp(header, kMagic, 4) != 0) {
    throw DecodeError(DecodeErrorKind::BadMagic, "bad magic, not a grid file");
  }
  if (!get_bytes(in, header + 4, sizeof(header) - 4)) {
    throw DecodeError(DecodeErrorKind::BadHeader, "stream too short for header");
  }
  const std::uint16_t version = u16_from(header + 4);
  if (version != kVersion) {
    throw DecodeError(DecodeErrorKind::BadVersion,
                      "unsupported grid format version " + std::to_string(version));
  }
  const std::uint8_t tag = header[6];
  if (tag > 1) {
    throw DecodeError(DecodeErrorKind::BadHeader,
                      "invalid label-space tag " + std::to_string(tag));
  }
  VoxelGrid grid;
  grid.space = static_cast<LabelSpace>(tag);
  for (int a = 0; a < 3; ++a) {
    const std::uint32_t d = u32_from(header + 8 + 4 * a);
    if (d == 0 || d > (1u << 24)) {
      throw DecodeError(DecodeErrorKind::BadHeader, "invalid grid dimension");
    }
    grid.config.dims[a] = static_cast<int>(d);
  }
  grid.config.voxel_size = f32_from(header + 20);
  for (int a = 0; a < 3; ++a) grid.config.origin[a] = f32_from(header + 24 + 4 * a);
  if (!(grid.config.voxel_size > 0.0f)) {
    throw DecodeError(DecodeErrorKind::BadHeader, "non-positive voxel size");
  }
  const std::uint8_t classes = header[36];
  if (classes != class_count(grid.space)) {
    throw DecodeError(DecodeErrorKind::BadHeader,
                      "class count does not match label space");
  }

  const std::size_t n = grid.config.num_voxels();
  if (n > (std::size_t{1} << 31)) {
    throw DecodeError(DecodeErrorKind::BadHeader, "grid dims product too large");
  }
  grid.labels.resize(n);
  if (!get_bytes(in, grid.labels.data(), n)) {
    throw DecodeError(DecodeErrorKind::TruncatedPayload,
                      "payload shorter than dims product");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DecodeError(DecodeErrorKind::PayloadMismatch,
                      "trailing bytes after payload");
  }
  for (const std::uint8_t id : grid.labels) {
    if (id >= classes) {
      throw DecodeError(DecodeErrorKind::PayloadMismatch,
                        "label id outside the class table");
    }
  }
  return grid;
}

void save_grid(const VoxelGrid& grid, const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot open for write: " + tmp.string());
    write_grid(grid, out);
  }

  nlohmann::json side;
  side["label_space"] = grid.space == LabelSpace::Semantic ? "semantic" : "cost";
  nlohmann::json classes = nlohmann::json::object();
  for (int i = 0; i < class_count(grid.space); ++i) {
    classes[std::to_string(i)] = label_name(grid.space, static_cast<std::uint8_t>(i));
  }
  side["classes"] = classes;

  fs::path side_path = path;
  side_path.replace_extension(".json");
  const fs::path side_tmp = side_path.string() + ".tmp";
  {
    std::ofstream out(side_tmp, std::ios::trunc);
    if (!out) throw InputError("cannot open for write: " + side_tmp.string());
    out << side.dump(2) << "\n";
  }
  fs::rename(tmp, path);
  fs::rename(side_tmp, side_path);
}

VoxelGrid load_grid(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open grid file: " + path.string());
  return read_grid(in);
}

}  // namespace ord
