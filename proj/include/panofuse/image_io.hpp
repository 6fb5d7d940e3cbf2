// PNG readers/writers for the CLI surface: 8-bit RGB images and 16-bit
// single-channel depth maps.
//
// Depth encoding: decoded depth = raw * scale (meters per unit, default
// 1/4000); raw 0 marks an invalid pixel, so valid pixels clamp to at least
// raw 1 on write.

#pragma once

#include <string>

#include "panofuse/feature_map.hpp"
#include "panofuse/metrics.hpp"

namespace pnf {

inline constexpr double kDefaultDepthScale = 1.0 / 4000.0;

// Decodes any PNG to 8-bit RGB; returns C=3 with values in [0, 255].
FeatureMap read_rgb8(const std::string& path);

// Writes C=3 as RGB or C=1 as grayscale; values are rounded and clamped to
// [0, 255].
void write_rgb8(const std::string& path, const FeatureMap& image);

// Requires a 16-bit single-channel (grayscale) PNG.
DepthMap read_depth_png16(const std::string& path, double scale = kDefaultDepthScale);

void write_depth_png16(const std::string& path, const DepthMap& depth,
                       double scale = kDefaultDepthScale);

}  // namespace pnf
