#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "smokesynth/image.hpp"

namespace smokesynth {

/// Per-pixel class distributions, stored pixel-major (all classes of pixel 0,
/// then pixel 1, ...).
class ProbabilityMap {
 public:
  static constexpr double kSumTolerance = 1e-6;

  /// Throws InvalidArgument unless classes >= 2, the length matches and every
  /// pixel is a distribution (non-negative, sums to 1 within 1e-6).
  ProbabilityMap(int width, int height, int classes, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int classes() const noexcept { return classes_; }
  Dims dims() const noexcept { return {width_, height_}; }
  std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }

  std::span<const double> pixel(std::size_t i) const noexcept {
    return std::span<const double>(data_).subspan(i * classes_, classes_);
  }
  double at(int x, int y, int c) const noexcept {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * classes_ + c];
  }

 private:
  int width_;
  int height_;
  int classes_;
  std::vector<double> data_;
};

/// Clamp applied inside every logarithm of the loss kernels.
inline constexpr double kLogEpsilon = 1e-7;

/// -(1/ln C) sum p ln p with 0 ln 0 = 0, clamped to [0,1].
double normalized_entropy(std::span<const double> distribution);

/// normalized_entropy per pixel as a 1-channel image.
RasterImage entropy_map(const ProbabilityMap& probs);

/// Mean over pixels of -ln(clamp(p[gt], eps, 1-eps)).
double pixel_cross_entropy(const ProbabilityMap& probs, const BinaryMask& gt);

/// Mean of -[t ln p + (1-t) ln(1-p)] with p clamped to [eps, 1-eps].
double pixel_bce(std::span<const double> pred, std::span<const std::uint8_t> target);

inline constexpr double kDefaultAdversarialWeight = 0.1;

/// One weight per adversarial term; a single weight is broadcast.
struct AdversarialWeights {
  std::vector<double> lambdas{kDefaultAdversarialWeight};
};

/// seg_loss + sum_i lambda_i * adv_losses[i]. Throws InvalidArgument on a
/// negative weight or when the weight count is neither 1 nor the loss count.
double adversarial_objective(double seg_loss, std::span<const double> adv_losses,
                             const AdversarialWeights& weights = {});

/// C feature maps of H x W, stored channel-major.
class FeatureStack {
 public:
  FeatureStack(int channels, int height, int width, std::vector<double> data);

  int channels() const noexcept { return channels_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  Dims dims() const noexcept { return {width_, height_}; }
  std::span<const double> data() const noexcept { return data_; }
  double at(int c, int x, int y) const noexcept {
    return data_[(static_cast<std::size_t>(c) * height_ + y) * width_ + x];
  }

 private:
  int channels_;
  int height_;
  int width_;
  std::vector<double> data_;
};

struct GramMatrix {
  int size = 0;
  std::vector<double> values;

  double at(int i, int j) const noexcept { return values[static_cast<std::size_t>(i) * size + j]; }
};

/// G_ij = sum_xy F_i F_j / (H W), with features zeroed outside `mask` when
/// one is given.
GramMatrix gram_matrix(const FeatureStack& features, const BinaryMask* mask = nullptr);

struct StyleContentLoss {
  double style = 0.0;
  double content = 0.0;
};

/// style = mean squared difference of the masked Gram matrices of gen and
/// style; content = mean squared difference of the masked gen and content
/// features.
StyleContentLoss style_content_losses(const FeatureStack& generated, const FeatureStack& style,
                                      const FeatureStack& content, const BinaryMask* mask = nullptr);

}  // namespace smokesynth
