#pragma once

// Binary raster files. All multi-byte fields are little-endian.
//
//   depth  "DPTF" u32 width, u32 height, float32[w*h] meters (0 = invalid)
//   image  "IMGF" u32 width, u32 height, u32 channels, float32[w*h*c] interleaved
//   mask   "MSK1" u32 width, u32 height, u8[w*h] in {0, 1}
//   normal "NRMF" u32 width, u32 height, float32[3*w*h]; validity lives in a MSK1 file

#include <string>

#include "articugeo/grid.hpp"

namespace articugeo {

void write_depth(const std::string& path, const DepthMap& depth);
DepthMap read_depth(const std::string& path);

void write_image(const std::string& path, const ImageBuffer& image);
ImageBuffer read_image(const std::string& path);

void write_mask(const std::string& path, const PixelMask& mask);
PixelMask read_mask(const std::string& path);

/// Writes the normal vectors only; pair with write_mask for validity.
void write_normals(const std::string& path, const NormalMap& normals);
/// Reads vectors and attaches `valid` (all-valid when empty). Orientation is
/// not stored in the file and defaults to kTowardCamera.
NormalMap read_normals(const std::string& path, const PixelMask& valid = {},
                       NormalOrientation orientation = NormalOrientation::kTowardCamera);

}  // namespace articugeo
