#include "smokesynth/morphology.hpp"

#include <algorithm>

#include "smokesynth/simd/kernels.hpp"

namespace smokesynth {
namespace {

// Separable: sliding extreme along rows, then across a clipped band of rows.
BinaryMask square_filter(const BinaryMask& mask, int radius, bool take_max) {
  if (radius < 0) throw Error(ErrorKind::InvalidArgument, "morphology radius must be >= 0");
  if (radius == 0) return mask;

  const auto& k = simd::active();
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask rows(w, h);
  for (int y = 0; y < h; ++y) {
    k.window_extreme(mask.row(y).data(), rows.row(y).data(), static_cast<std::size_t>(w), radius, take_max);
  }

  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - radius);
    const int y1 = std::min(h - 1, y + radius);
    auto acc = out.row(y);
    const auto first = rows.row(y0);
    std::copy(first.begin(), first.end(), acc.begin());
    for (int yy = y0 + 1; yy <= y1; ++yy) {
      k.combine_extreme(acc.data(), rows.row(yy).data(), static_cast<std::size_t>(w), take_max);
    }
  }
  return out;
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, int radius) { return square_filter(mask, radius, true); }

BinaryMask erode(const BinaryMask& mask, int radius) { return square_filter(mask, radius, false); }

}  // namespace smokesynth
