#include "smokesynth/matting.hpp"

#include <algorithm>

#include "smokesynth/morphology.hpp"
#include "smokesynth/simd/kernels.hpp"

namespace smokesynth {

void TrimapThresholds::validate() const {
  const auto in_open_unit = [](float v) { return v > 0.0f && v < 1.0f; };
  if (!in_open_unit(foreground) || !in_open_unit(background)) {
    throw Error(ErrorKind::InvalidArgument, "trimap thresholds must lie in (0,1)");
  }
  if (!(background < foreground)) {
    throw Error(ErrorKind::InvalidArgument, "trimap background threshold must be below the foreground threshold");
  }
  if (band_radius < 0) throw Error(ErrorKind::InvalidArgument, "trimap band radius must be >= 0");
}

Trimap trimap_from_alpha(const AlphaMatte& alpha, const TrimapThresholds& thresholds) {
  thresholds.validate();
  Trimap trimap(alpha.width(), alpha.height());
  BinaryMask unknown(alpha.width(), alpha.height());
  const auto a = alpha.data();
  auto labels = trimap.data();
  auto band = unknown.data();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= thresholds.foreground) {
      labels[i] = TrimapLabel::Foreground;
    } else if (a[i] <= thresholds.background) {
      labels[i] = TrimapLabel::Background;
    } else {
      labels[i] = TrimapLabel::Unknown;
      band[i] = 1;
    }
  }
  if (thresholds.band_radius > 0) {
    const BinaryMask widened = dilate(unknown, thresholds.band_radius);
    const auto w = widened.data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i]) labels[i] = TrimapLabel::Unknown;
    }
  }
  return trimap;
}

Trimap trimap_from_mask(const BinaryMask& mask, int erode_radius, int band_radius,
                        std::vector<std::string>* warnings) {
  if (erode_radius < 0 || band_radius < 0) {
    throw Error(ErrorKind::InvalidArgument, "trimap radii must be >= 0");
  }
  const BinaryMask inner = erode(mask, erode_radius);
  const BinaryMask outer = dilate(mask, band_radius);
  Trimap trimap(mask.width(), mask.height());
  const auto fg = inner.data();
  const auto reach = outer.data();
  auto labels = trimap.data();
  bool any_fg = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (fg[i]) {
      labels[i] = TrimapLabel::Foreground;
      any_fg = true;
    } else if (!reach[i]) {
      labels[i] = TrimapLabel::Background;
    } else {
      labels[i] = TrimapLabel::Unknown;
    }
  }
  const auto m = mask.data();
  const bool any_smoke = std::find(m.begin(), m.end(), std::uint8_t{1}) != m.end();
  if (any_smoke && !any_fg && warnings != nullptr) {
    warnings->push_back("erode radius " + std::to_string(erode_radius) +
                        " removed every foreground pixel; trimap has no definite foreground");
  }
  return trimap;
}

RasterImage matte_composite(const RasterImage& foreground, const AlphaMatte& alpha, const RasterImage& background) {
  require_same_dims(foreground.dims(), alpha.dims(), "matte_composite: foreground vs alpha");
  require_same_dims(background.dims(), alpha.dims(), "matte_composite: background vs alpha");
  if (foreground.channels() != 3 || background.channels() != 3) {
    throw Error(ErrorKind::InvalidArgument, "matte_composite: images must have 3 channels");
  }
  RasterImage out(background.width(), background.height(), 3);
  simd::active().blend(foreground.data().data(), background.data().data(), alpha.data().data(),
                       out.data().data(), alpha.size(), 3);
  return out;
}

TrimapValidation validate_trimap(const Trimap& trimap, const BinaryMask& mask) {
  require_same_dims(trimap.dims(), mask.dims(), "validate_trimap");
  TrimapValidation report;
  for (int y = 0; y < trimap.height(); ++y) {
    for (int x = 0; x < trimap.width(); ++x) {
      const TrimapLabel label = trimap.at(x, y);
      const bool smoke = mask.at(x, y) != 0;
      bool violation = false;
      switch (label) {
        case TrimapLabel::Foreground:
          ++report.foreground_count;
          if (!smoke) {
            ++report.foreground_violations;
            violation = true;
          }
          break;
        case TrimapLabel::Background:
          ++report.background_count;
          if (smoke) {
            ++report.background_violations;
            violation = true;
          }
          break;
        case TrimapLabel::Unknown:
          ++report.unknown_count;
          break;
      }
      if (violation && report.first_violations.size() < 16) report.first_violations.push_back({x, y});
    }
  }
  return report;
}

}  // namespace smokesynth
