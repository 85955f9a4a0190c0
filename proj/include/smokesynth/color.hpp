#pragma once

#include "smokesynth/image.hpp"

namespace smokesynth {

inline constexpr float kLumaRed = 0.299f;
inline constexpr float kLumaGreen = 0.587f;
inline constexpr float kLumaBlue = 0.114f;

/// Rec.601 luma. One-channel input is returned unchanged.
RasterImage luminance(const RasterImage& image);

/// Replicates a gray image into three channels; RGB input is returned as-is.
RasterImage to_rgb(const RasterImage& image);

}  // namespace smokesynth
