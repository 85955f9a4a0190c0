#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "smokesynth/image.hpp"

namespace smokesynth {

/// Whether smoke source frames show the plume bright-on-dark or
/// dark-on-white.
enum class BackgroundPolarity { Dark, White };

std::string_view to_string(BackgroundPolarity polarity) noexcept;
/// Accepts "dark" / "white".
BackgroundPolarity parse_polarity(std::string_view text);

struct Anchor {
  int x = 0;
  int y = 0;

  bool operator==(const Anchor&) const = default;
};

/// Seeded description of one plume transform.
///
/// `scale` is the resample factor applied to the plume itself. When params
/// come from sample_params, `width_fraction` holds the drawn plume width as a
/// fraction of the background width and `scale` is derived from it; for hand
/// built params it is 0.
struct AugmentationParams {
  double scale = 1.0;
  double width_fraction = 0.0;
  bool flip_horizontal = false;
  double rotation_deg = 0.0;
  std::array<double, 3> tint{1.0, 1.0, 1.0};
  double opacity = 1.0;
  Anchor anchor;

  bool operator==(const AugmentationParams&) const = default;
};

struct SampleRecipe {
  std::string smoke_source;
  std::string background_source;
  BackgroundPolarity polarity = BackgroundPolarity::White;
  AugmentationParams params;
  std::uint64_t seed = 0;
};

/// Sampling ranges for sample_params.
struct AugmentationRanges {
  double width_fraction_min = 0.1;
  double width_fraction_max = 0.6;
  double rotation_max_deg = 15.0;
  double tint_min = 0.8;
  double tint_max = 1.2;
  double opacity_min = 0.3;
  double opacity_max = 1.0;
  double flip_probability = 0.5;
  int max_retries = 16;

  /// Checks ordering and the hard limits (fractions in (0,1], opacity in
  /// (0,1], positive tint, rotation within +-180).
  void validate() const;
};

/// Throws InvalidArgument unless `params` lies inside `ranges` (rotation
/// within +-rotation_max_deg, tint and opacity within their bounds).
void validate_params(const AugmentationParams& params, const AugmentationRanges& ranges = {});

struct AugmentedPlume {
  RasterImage image;
  AlphaMatte alpha;
};

struct GeneratedSample {
  RasterImage image;
  BinaryMask mask;
  /// Plume alpha placed into a full background-sized frame.
  AlphaMatte alpha;
};

inline constexpr float kDefaultMaskThreshold = 0.1f;

/// alpha = L for dark backgrounds, 1 - L for white ones, L = Rec.601 luma.
AlphaMatte intensity_alpha(const RasterImage& smoke, BackgroundPolarity polarity);

/// Extent of a plume after scaling by `scale` and rotating by `rotation_deg`
/// into its axis-aligned bounding canvas. Throws InvalidArgument when a
/// scaled side falls below one pixel.
Dims transformed_dims(Dims plume, double scale, double rotation_deg);

/// Scale (bilinear, edge-clamped), optional mirror, rotation about the centre
/// (bilinear, zero outside the source), then tint on the image and opacity on
/// the alpha. Image and alpha share every geometric step. The anchor is not
/// used here.
AugmentedPlume augment(const RasterImage& smoke, const AlphaMatte& alpha, const AugmentationParams& params);

/// Over-composites the plume rectangle at `anchor`:
/// out = a*S + (1-a)*B inside, out = B elsewhere. Gray smoke is broadcast to
/// RGB. Throws InvalidArgument when the plume does not fit.
RasterImage composite(const RasterImage& smoke, const AlphaMatte& alpha, const RasterImage& background,
                      Anchor anchor);

/// 1 where alpha >= tau. tau must lie in (0,1).
BinaryMask derive_mask(const AlphaMatte& alpha, float tau = kDefaultMaskThreshold);

/// intensity_alpha -> augment -> composite -> derive_mask. Pure function of
/// its arguments.
GeneratedSample generate_sample(const SampleRecipe& recipe, const RasterImage& smoke,
                                const RasterImage& background, float tau = kDefaultMaskThreshold);

/// Draws params from a generator seeded by derive_seed(master_seed, index).
/// Draw order: flip, rotation, tint r/g/b, opacity, width fraction (redrawn
/// up to max_retries times until the transformed plume fits), anchor x, y.
/// Throws Infeasible when no draw fits.
AugmentationParams sample_params(std::uint64_t master_seed, std::uint64_t index, Dims background, Dims plume,
                                 const AugmentationRanges& ranges = {});

}  // namespace smokesynth
