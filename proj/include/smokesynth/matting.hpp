#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "smokesynth/image.hpp"

namespace smokesynth {

struct TrimapThresholds {
  float foreground = 0.95f;
  float background = 0.05f;
  int band_radius = 5;

  /// Both thresholds in (0,1), background < foreground, radius >= 0.
  void validate() const;
};

inline constexpr int kDefaultErodeRadius = 3;
inline constexpr int kDefaultBandRadius = 5;

/// FG where alpha >= foreground, BG where alpha <= background, UNKNOWN
/// otherwise; the UNKNOWN set is then dilated by band_radius with a square
/// element and overwrites whatever it covers.
Trimap trimap_from_alpha(const AlphaMatte& alpha, const TrimapThresholds& thresholds = {});

/// FG = erode(mask, erode_radius), BG = not dilate(mask, band_radius),
/// UNKNOWN = the rest. When the mask has smoke but erosion removes all of it
/// a note is appended to `warnings`.
Trimap trimap_from_mask(const BinaryMask& mask, int erode_radius = kDefaultErodeRadius,
                        int band_radius = kDefaultBandRadius, std::vector<std::string>* warnings = nullptr);

/// Full-frame over operator, out = a*F + (1-a)*B. All inputs share
/// dimensions; images have 3 channels.
RasterImage matte_composite(const RasterImage& foreground, const AlphaMatte& alpha, const RasterImage& background);

struct TrimapValidation {
  std::size_t foreground_count = 0;
  std::size_t background_count = 0;
  std::size_t unknown_count = 0;
  /// FG pixels whose mask value is 0.
  std::size_t foreground_violations = 0;
  /// BG pixels whose mask value is 1.
  std::size_t background_violations = 0;
  /// Up to the first 16 offending pixels, row-major order.
  std::vector<PixelCoord> first_violations;

  std::size_t violations() const noexcept { return foreground_violations + background_violations; }
  bool passed() const noexcept { return violations() == 0; }
};

TrimapValidation validate_trimap(const Trimap& trimap, const BinaryMask& mask);

}  // namespace smokesynth
