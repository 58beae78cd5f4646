// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>

#include "ord/errors.hpp"
#include "ord/grid.hpp"

namespace ord {

/// The five decode failure categories of the grid file format.
enum class DecodeErrorKind {
  BadMagic,          // leading bytes are not "ORDG"
  BadVersion,        // format version not supported
  BadHeader,         // header field invalid (label tag, dims, voxel size, ...)
  TruncatedPayload,  // stream ends before dims-product label bytes
  PayloadMismatch,   // trailing bytes or label id outside the class table
};

const char* decode_error_name(DecodeErrorKind kind);

class DecodeError : public InputError {
 public:
  DecodeError(DecodeErrorKind kind, const std::string& what)
      : InputError(what), kind_(kind) {}
  DecodeErrorKind kind() const { return kind_; }

 private:
  DecodeErrorKind kind_;
};

// Grid file format, little-endian:
//   magic "ORDG" (4 bytes), version u16 (=1), label-space tag u8
//   (0 = semantic, 1 = cost), reserved u8, dims 3 x u32, voxel_size f32,
//   origin 3 x f32, class count u8, then dims-product bytes of label ids
//   in x-major order.
void write_grid(const VoxelGrid& grid, std::ostream& out);
VoxelGrid read_grid(std::istream& in);

/// Writes the grid plus a JSON sidecar (same stem, ".json") carrying the
/// id -> name table. Write-to-temp then rename; no partial file remains on
/// error.
void save_grid(const VoxelGrid& grid, const std::filesystem::path& path);
VoxelGrid load_grid(const std::filesystem::path& path);

}  // namespace ord
