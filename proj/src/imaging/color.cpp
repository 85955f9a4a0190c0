#include "smokesynth/color.hpp"

#include "smokesynth/simd/kernels.hpp"

namespace smokesynth {

RasterImage luminance(const RasterImage& image) {
  if (image.channels() == 1) return image;
  RasterImage out(image.width(), image.height(), 1);
  simd::active().luminance_rgb(image.data().data(), out.data().data(), image.pixel_count());
  return out;
}

RasterImage to_rgb(const RasterImage& image) {
  if (image.channels() == 3) return image;
  RasterImage out(image.width(), image.height(), 3);
  const auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
  }
  return out;
}

}  // namespace smokesynth
