#include "smokesynth/image.hpp"

#include <algorithm>
#include <string>

namespace smokesynth {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Infeasible: return "infeasible";
  }
  return "unknown";
}

namespace {

void check_shape(int width, int height, int channels) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::InvalidArgument, "image dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw Error(ErrorKind::InvalidArgument,
                "image must have 1 or 3 channels, got " + std::to_string(channels));
  }
}

}  // namespace

RasterImage::RasterImage(int width, int height, int channels, float fill)
    : width_(width), height_(height), channels_(channels) {
  check_shape(width, height, channels);
  if (!(fill >= 0.0f && fill <= 1.0f)) {
    throw Error(ErrorKind::InvalidArgument, "image fill value outside [0,1]");
  }
  data_.assign(pixel_count() * static_cast<std::size_t>(channels), fill);
}

RasterImage::RasterImage(int width, int height, int channels, std::vector<float> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_shape(width, height, channels);
  if (data_.size() != pixel_count() * static_cast<std::size_t>(channels)) {
    throw Error(ErrorKind::InvalidArgument, "image data length does not match width*height*channels");
  }
  if (!std::all_of(data_.begin(), data_.end(), [](float v) { return v >= 0.0f && v <= 1.0f; })) {
    throw Error(ErrorKind::InvalidArgument, "image values must lie in [0,1]");
  }
}

void require_same_dims(Dims a, Dims b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                    " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
  }
}

bool is_valid_alpha(const AlphaMatte& alpha) {
  const auto d = alpha.data();
  return std::all_of(d.begin(), d.end(), [](float v) { return v >= 0.0f && v <= 1.0f; });
}

bool is_valid_mask(const BinaryMask& mask) {
  const auto d = mask.data();
  return std::all_of(d.begin(), d.end(), [](std::uint8_t v) { return v <= 1; });
}

}  // namespace smokesynth
