#pragma once

#include "smokesynth/image.hpp"

namespace smokesynth {

/// Binary dilation with a (2r+1)x(2r+1) square element. The window is clipped
/// to the frame, so pixels outside the image neither add nor remove labels.
BinaryMask dilate(const BinaryMask& mask, int radius);

/// Binary erosion with the same clipped square element.
BinaryMask erode(const BinaryMask& mask, int radius);

}  // namespace smokesynth
