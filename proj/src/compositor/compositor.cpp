#include "smokesynth/compositor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "smokesynth/color.hpp"
#include "smokesynth/random.hpp"
#include "smokesynth/simd/kernels.hpp"

namespace smokesynth {
namespace {

// Interleaved float buffer used between geometric stages.
struct Planar {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> data;

  float at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

Planar from_image(const RasterImage& image) {
  const auto d = image.data();
  return {image.width(), image.height(), image.channels(), {d.begin(), d.end()}};
}

Planar from_alpha(const AlphaMatte& alpha) {
  const auto d = alpha.data();
  return {alpha.width(), alpha.height(), 1, {d.begin(), d.end()}};
}

float to_unit(double v) {
  const float f = static_cast<float>(v);
  return f < 0.0f ? 0.0f : (f > 1.0f ? 1.0f : f);
}

double lerp2(double p00, double p10, double p01, double p11, double tx, double ty) {
  const double top = p00 * (1.0 - tx) + p10 * tx;
  const double bottom = p01 * (1.0 - tx) + p11 * tx;
  return top * (1.0 - ty) + bottom * ty;
}

// Pixel-centre aligned bilinear resize with edge clamping.
Planar resize_bilinear(const Planar& src, Dims out) {
  Planar dst{out.width, out.height, src.channels,
             std::vector<float>(static_cast<std::size_t>(out.width) * out.height * src.channels)};
  const double sx = static_cast<double>(src.width) / out.width;
  const double sy = static_cast<double>(src.height) / out.height;
  std::size_t o = 0;
  for (int y = 0; y < out.height; ++y) {
    double v = (y + 0.5) * sy - 0.5;
    v = std::clamp(v, 0.0, static_cast<double>(src.height - 1));
    const int y0 = static_cast<int>(std::floor(v));
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double ty = v - y0;
    for (int x = 0; x < out.width; ++x) {
      double u = (x + 0.5) * sx - 0.5;
      u = std::clamp(u, 0.0, static_cast<double>(src.width - 1));
      const int x0 = static_cast<int>(std::floor(u));
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double tx = u - x0;
      for (int c = 0; c < src.channels; ++c) {
        dst.data[o++] = to_unit(lerp2(src.at(x0, y0, c), src.at(x1, y0, c), src.at(x0, y1, c),
                                      src.at(x1, y1, c), tx, ty));
      }
    }
  }
  return dst;
}

void flip_horizontal(Planar& p) {
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width / 2; ++x) {
      const int mirror = p.width - 1 - x;
      for (int c = 0; c < p.channels; ++c) {
        std::swap(p.data[(static_cast<std::size_t>(y) * p.width + x) * p.channels + c],
                  p.data[(static_cast<std::size_t>(y) * p.width + mirror) * p.channels + c]);
      }
    }
  }
}

// Rotation about the centre into the bounding canvas `out`. Positive angles
// turn the plume counterclockwise as displayed (y axis pointing down).
Planar rotate_bilinear(const Planar& src, double degrees, Dims out) {
  Planar dst{out.width, out.height, src.channels,
             std::vector<float>(static_cast<std::size_t>(out.width) * out.height * src.channels)};
  const double theta = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  const double cxo = out.width / 2.0;
  const double cyo = out.height / 2.0;
  const double cxi = src.width / 2.0;
  const double cyi = src.height / 2.0;
  auto sample = [&](int x, int y, int c) -> double {
    if (x < 0 || y < 0 || x >= src.width || y >= src.height) return 0.0;
    return src.at(x, y, c);
  };
  std::size_t o = 0;
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const double dx = x + 0.5 - cxo;
      const double dy = y + 0.5 - cyo;
      const double u = cs * dx - sn * dy + cxi - 0.5;
      const double v = sn * dx + cs * dy + cyi - 0.5;
      const int x0 = static_cast<int>(std::floor(u));
      const int y0 = static_cast<int>(std::floor(v));
      const double tx = u - x0;
      const double ty = v - y0;
      for (int c = 0; c < src.channels; ++c) {
        dst.data[o++] = to_unit(lerp2(sample(x0, y0, c), sample(x0 + 1, y0, c), sample(x0, y0 + 1, c),
                                      sample(x0 + 1, y0 + 1, c), tx, ty));
      }
    }
  }
  return dst;
}

void check_fraction(double v, const char* what) {
  if (!(v > 0.0 && v <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " must lie in (0,1]");
  }
}

void require_range(double v, double lo, double hi, const char* what) {
  if (!(v >= lo && v <= hi)) {
    throw Error(ErrorKind::InvalidArgument, std::string(what) + " = " + std::to_string(v) +
                                                " outside [" + std::to_string(lo) + ", " +
                                                std::to_string(hi) + "]");
  }
}

}  // namespace

std::string_view to_string(BackgroundPolarity polarity) noexcept {
  return polarity == BackgroundPolarity::Dark ? "dark" : "white";
}

BackgroundPolarity parse_polarity(std::string_view text) {
  if (text == "dark") return BackgroundPolarity::Dark;
  if (text == "white") return BackgroundPolarity::White;
  throw Error(ErrorKind::InvalidArgument, "polarity must be 'dark' or 'white', got '" + std::string(text) + "'");
}

void AugmentationRanges::validate() const {
  check_fraction(width_fraction_min, "width_fraction_min");
  check_fraction(width_fraction_max, "width_fraction_max");
  check_fraction(opacity_min, "opacity_min");
  check_fraction(opacity_max, "opacity_max");
  require_range(rotation_max_deg, 0.0, 180.0, "rotation_max_deg");
  require_range(flip_probability, 0.0, 1.0, "flip_probability");
  if (!(tint_min > 0.0) || !std::isfinite(tint_max)) {
    throw Error(ErrorKind::InvalidArgument, "tint bounds must be positive and finite");
  }
  if (width_fraction_min > width_fraction_max || opacity_min > opacity_max || tint_min > tint_max) {
    throw Error(ErrorKind::InvalidArgument, "augmentation range minimum exceeds maximum");
  }
  if (max_retries < 0) throw Error(ErrorKind::InvalidArgument, "max_retries must be >= 0");
}

void validate_params(const AugmentationParams& params, const AugmentationRanges& ranges) {
  if (!(params.scale > 0.0) || !std::isfinite(params.scale)) {
    throw Error(ErrorKind::InvalidArgument, "scale must be positive and finite");
  }
  require_range(params.rotation_deg, -ranges.rotation_max_deg, ranges.rotation_max_deg, "rotation_deg");
  for (double t : params.tint) require_range(t, ranges.tint_min, ranges.tint_max, "tint");
  check_fraction(params.opacity, "opacity");
  if (params.anchor.x < 0 || params.anchor.y < 0) {
    throw Error(ErrorKind::InvalidArgument, "anchor must be non-negative");
  }
}

AlphaMatte intensity_alpha(const RasterImage& smoke, BackgroundPolarity polarity) {
  const RasterImage luma = luminance(smoke);
  const auto l = luma.data();
  std::vector<float> alpha(l.begin(), l.end());
  if (polarity == BackgroundPolarity::White) {
    for (float& a : alpha) a = 1.0f - a;
  }
  return AlphaMatte(smoke.width(), smoke.height(), std::move(alpha));
}

Dims transformed_dims(Dims plume, double scale, double rotation_deg) {
  const double w = std::round(plume.width * scale);
  const double h = std::round(plume.height * scale);
  if (!(w >= 1.0 && h >= 1.0) || !std::isfinite(w) || !std::isfinite(h)) {
    throw Error(ErrorKind::InvalidArgument,
                "degenerate plume size after scaling by " + std::to_string(scale));
  }
  if (rotation_deg == 0.0) return {static_cast<int>(w), static_cast<int>(h)};
  const double theta = rotation_deg * std::numbers::pi / 180.0;
  const double cs = std::abs(std::cos(theta));
  const double sn = std::abs(std::sin(theta));
  // Tolerance keeps exact multiples (90 degrees, say) from growing a pixel.
  const double rw = std::ceil(w * cs + h * sn - 1e-9);
  const double rh = std::ceil(w * sn + h * cs - 1e-9);
  return {std::max(1, static_cast<int>(rw)), std::max(1, static_cast<int>(rh))};
}

AugmentedPlume augment(const RasterImage& smoke, const AlphaMatte& alpha, const AugmentationParams& params) {
  require_same_dims(smoke.dims(), alpha.dims(), "augment: smoke vs alpha");
  if (!(params.scale > 0.0) || !std::isfinite(params.scale) || !std::isfinite(params.rotation_deg)) {
    throw Error(ErrorKind::InvalidArgument, "augment: scale must be positive and rotation finite");
  }
  check_fraction(params.opacity, "opacity");
  for (double t : params.tint) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorKind::InvalidArgument, "tint must be >= 0");
  }

  const Dims scaled = transformed_dims(smoke.dims(), params.scale, 0.0);
  const bool tinted = params.tint != std::array<double, 3>{1.0, 1.0, 1.0};
  Planar image = from_image(tinted ? to_rgb(smoke) : smoke);
  Planar matte = from_alpha(alpha);

  if (scaled != smoke.dims()) {
    image = resize_bilinear(image, scaled);
    matte = resize_bilinear(matte, scaled);
  }
  if (params.flip_horizontal) {
    flip_horizontal(image);
    flip_horizontal(matte);
  }
  if (params.rotation_deg != 0.0) {
    const Dims canvas = transformed_dims(scaled, 1.0, params.rotation_deg);
    image = rotate_bilinear(image, params.rotation_deg, canvas);
    matte = rotate_bilinear(matte, params.rotation_deg, canvas);
  }

  const auto& k = simd::active();
  const std::size_t pixels = static_cast<std::size_t>(image.width) * image.height;
  if (tinted) {
    const float factors[3] = {static_cast<float>(params.tint[0]), static_cast<float>(params.tint[1]),
                              static_cast<float>(params.tint[2])};
    k.multiply_clamp(image.data.data(), pixels, factors, 3);
  }
  if (params.opacity != 1.0) {
    const float factor = static_cast<float>(params.opacity);
    k.multiply_clamp(matte.data.data(), pixels, &factor, 1);
  }

  return {RasterImage(image.width, image.height, image.channels, std::move(image.data)),
          AlphaMatte(matte.width, matte.height, std::move(matte.data))};
}

RasterImage composite(const RasterImage& smoke, const AlphaMatte& alpha, const RasterImage& background,
                      Anchor anchor) {
  require_same_dims(smoke.dims(), alpha.dims(), "composite: smoke vs alpha");
  if (background.channels() != 3) {
    throw Error(ErrorKind::InvalidArgument, "composite: background must have 3 channels");
  }
  if (anchor.x < 0 || anchor.y < 0 || anchor.x + smoke.width() > background.width() ||
      anchor.y + smoke.height() > background.height()) {
    throw Error(ErrorKind::InvalidArgument,
                "composite: plume " + std::to_string(smoke.width()) + "x" + std::to_string(smoke.height()) +
                    " at (" + std::to_string(anchor.x) + "," + std::to_string(anchor.y) +
                    ") does not fit background " + std::to_string(background.width()) + "x" +
                    std::to_string(background.height()));
  }
  const RasterImage rgb = to_rgb(smoke);
  RasterImage out = background;
  const auto& k = simd::active();
  const std::size_t offset = static_cast<std::size_t>(anchor.x) * 3;
  for (int y = 0; y < smoke.height(); ++y) {
    const auto bg_row = background.row(anchor.y + y);
    auto out_row = out.row(anchor.y + y);
    k.blend(rgb.row(y).data(), bg_row.data() + offset, alpha.row(y).data(), out_row.data() + offset,
            static_cast<std::size_t>(smoke.width()), 3);
  }
  return out;
}

BinaryMask derive_mask(const AlphaMatte& alpha, float tau) {
  if (!(tau > 0.0f && tau < 1.0f)) {
    throw Error(ErrorKind::InvalidArgument, "mask threshold must lie in (0,1), got " + std::to_string(tau));
  }
  BinaryMask mask(alpha.width(), alpha.height());
  simd::active().threshold_ge(alpha.data().data(), mask.data().data(), alpha.size(), tau);
  return mask;
}

GeneratedSample generate_sample(const SampleRecipe& recipe, const RasterImage& smoke,
                                const RasterImage& background, float tau) {
  const AlphaMatte source_alpha = intensity_alpha(smoke, recipe.polarity);
  AugmentedPlume plume = augment(smoke, source_alpha, recipe.params);
  const RasterImage backdrop = to_rgb(background);
  RasterImage image = composite(plume.image, plume.alpha, backdrop, recipe.params.anchor);

  AlphaMatte placed(background.width(), background.height(), 0.0f);
  for (int y = 0; y < plume.alpha.height(); ++y) {
    const auto src = plume.alpha.row(y);
    auto dst = placed.row(recipe.params.anchor.y + y);
    std::copy(src.begin(), src.end(), dst.begin() + recipe.params.anchor.x);
  }
  BinaryMask mask = derive_mask(placed, tau);
  return {std::move(image), std::move(mask), std::move(placed)};
}

AugmentationParams sample_params(std::uint64_t master_seed, std::uint64_t index, Dims background, Dims plume,
                                 const AugmentationRanges& ranges) {
  ranges.validate();
  if (background.width <= 0 || background.height <= 0 || plume.width <= 0 || plume.height <= 0) {
    throw Error(ErrorKind::InvalidArgument, "sample_params: dimensions must be positive");
  }

  Rng rng(derive_seed(master_seed, index));
  AugmentationParams p;
  p.flip_horizontal = rng.bernoulli(ranges.flip_probability);
  p.rotation_deg = rng.uniform(-ranges.rotation_max_deg, ranges.rotation_max_deg);
  for (double& t : p.tint) t = rng.uniform(ranges.tint_min, ranges.tint_max);
  p.opacity = rng.uniform(ranges.opacity_min, ranges.opacity_max);

  Dims canvas;
  bool fits = false;
  for (int attempt = 0; attempt <= ranges.max_retries && !fits; ++attempt) {
    p.width_fraction = rng.uniform(ranges.width_fraction_min, ranges.width_fraction_max);
    p.scale = p.width_fraction * background.width / plume.width;
    try {
      canvas = transformed_dims(plume, p.scale, p.rotation_deg);
    } catch (const Error&) {
      continue;
    }
    fits = canvas.width <= background.width && canvas.height <= background.height;
  }
  if (!fits) {
    throw Error(ErrorKind::Infeasible, "sample_params: no placement of a " + std::to_string(plume.width) + "x" +
                                           std::to_string(plume.height) + " plume fits a " +
                                           std::to_string(background.width) + "x" +
                                           std::to_string(background.height) + " background after " +
                                           std::to_string(ranges.max_retries) + " retries");
  }
  p.anchor.x = static_cast<int>(rng.below(static_cast<std::uint64_t>(background.width - canvas.width) + 1));
  p.anchor.y = static_cast<int>(rng.below(static_cast<std::uint64_t>(background.height - canvas.height) + 1));
  return p;
}

}  // namespace smokesynth
