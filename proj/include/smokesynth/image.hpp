#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "smokesynth/error.hpp"

namespace smokesynth {

struct Dims {
  int width = 0;
  int height = 0;

  bool operator==(const Dims&) const = default;
};

struct PixelCoord {
  int x = 0;
  int y = 0;

  bool operator==(const PixelCoord&) const = default;
};

/// Row-major single-valued raster. The tag keeps mattes, masks and trimaps
/// from being passed for one another.
template <typename T, typename Tag>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
  }

  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
      throw Error(ErrorKind::InvalidArgument, "grid data length does not match width*height");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  Dims dims() const noexcept { return {width_, height_}; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::span<T> row(int y) {
    return std::span<T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }
  std::span<const T> row(int y) const {
    return std::span<const T>(data_).subspan(static_cast<std::size_t>(y) * width_, width_);
  }

  bool operator==(const Grid&) const = default;

 private:
  static void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
      throw Error(ErrorKind::InvalidArgument, "grid dimensions must be positive");
    }
  }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct AlphaTag;
struct MaskTag;
struct TrimapTag;

enum class TrimapLabel : std::uint8_t {
  Background = 0,
  Unknown = 1,
  Foreground = 2,
};

/// Per-pixel opacity in [0,1].
using AlphaMatte = Grid<float, AlphaTag>;
/// Per-pixel labels, 0 = background, 1 = smoke.
using BinaryMask = Grid<std::uint8_t, MaskTag>;
using Trimap = Grid<TrimapLabel, TrimapTag>;

/// H x W x C image (C is 1 or 3), interleaved, values in [0,1].
class RasterImage {
 public:
  RasterImage() = default;
  RasterImage(int width, int height, int channels, float fill = 0.0f);
  /// Validates length and that every value lies in [0,1].
  RasterImage(int width, int height, int channels, std::vector<float> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  Dims dims() const noexcept { return {width_, height_}; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  bool empty() const noexcept { return data_.empty(); }

  float& at(int x, int y, int c) { return data_[index(x, y, c)]; }
  float at(int x, int y, int c) const { return data_[index(x, y, c)]; }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }

  std::span<float> row(int y) {
    return std::span<float>(data_).subspan(row_offset(y), row_stride());
  }
  std::span<const float> row(int y) const {
    return std::span<const float>(data_).subspan(row_offset(y), row_stride());
  }

  bool operator==(const RasterImage&) const = default;

 private:
  std::size_t row_stride() const noexcept { return static_cast<std::size_t>(width_) * channels_; }
  std::size_t row_offset(int y) const noexcept { return static_cast<std::size_t>(y) * row_stride(); }
  std::size_t index(int x, int y, int c) const noexcept {
    return row_offset(y) + static_cast<std::size_t>(x) * channels_ + static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

/// Throws DimensionMismatch naming `what` when the two extents differ.
void require_same_dims(Dims a, Dims b, const char* what);

/// True iff every value is in [0,1].
bool is_valid_alpha(const AlphaMatte& alpha);
/// True iff every value is 0 or 1.
bool is_valid_mask(const BinaryMask& mask);

}  // namespace smokesynth
