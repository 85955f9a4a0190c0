#include "smokesynth/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smokesynth {
namespace {

double clamp_probability(double p) { return std::clamp(p, kLogEpsilon, 1.0 - kLogEpsilon); }

BinaryMask full_mask(Dims d) { return BinaryMask(d.width, d.height, std::uint8_t{1}); }

std::vector<double> masked_features(const FeatureStack& f, const BinaryMask& mask) {
  std::vector<double> out(f.data().begin(), f.data().end());
  const std::size_t plane = static_cast<std::size_t>(f.width()) * f.height();
  const auto m = mask.data();
  for (int c = 0; c < f.channels(); ++c) {
    for (std::size_t i = 0; i < plane; ++i) {
      if (!m[i]) out[c * plane + i] = 0.0;
    }
  }
  return out;
}

GramMatrix gram_of(const std::vector<double>& data, int channels, std::size_t plane) {
  GramMatrix g{channels, std::vector<double>(static_cast<std::size_t>(channels) * channels)};
  for (int i = 0; i < channels; ++i) {
    for (int j = i; j < channels; ++j) {
      double sum = 0.0;
      const double* a = data.data() + i * plane;
      const double* b = data.data() + j * plane;
      for (std::size_t k = 0; k < plane; ++k) sum += a[k] * b[k];
      const double v = sum / static_cast<double>(plane);
      g.values[static_cast<std::size_t>(i) * channels + j] = v;
      g.values[static_cast<std::size_t>(j) * channels + i] = v;
    }
  }
  return g;
}

void require_same_shape(const FeatureStack& a, const FeatureStack& b, const char* what) {
  if (a.channels() != b.channels() || a.dims() != b.dims()) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": feature stack shapes differ");
  }
}

}  // namespace

ProbabilityMap::ProbabilityMap(int width, int height, int classes, std::vector<double> data)
    : width_(width), height_(height), classes_(classes), data_(std::move(data)) {
  if (width <= 0 || height <= 0) throw Error(ErrorKind::InvalidArgument, "probability map dims must be positive");
  if (classes < 2) throw Error(ErrorKind::InvalidArgument, "probability map needs at least 2 classes");
  if (data_.size() != pixel_count() * static_cast<std::size_t>(classes)) {
    throw Error(ErrorKind::InvalidArgument, "probability map data length mismatch");
  }
  for (std::size_t i = 0; i < pixel_count(); ++i) {
    double sum = 0.0;
    for (double p : pixel(i)) {
      if (!(p >= 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "negative probability at pixel " + std::to_string(i));
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw Error(ErrorKind::InvalidArgument, "probabilities at pixel " + std::to_string(i) + " sum to " +
                                                  std::to_string(sum));
    }
  }
}

double normalized_entropy(std::span<const double> distribution) {
  double h = 0.0;
  for (double p : distribution) {
    if (p > 0.0) h -= p * std::log(p);
  }
  const double e = h / std::log(static_cast<double>(distribution.size()));
  return std::clamp(e, 0.0, 1.0);
}

RasterImage entropy_map(const ProbabilityMap& probs) {
  std::vector<float> out(probs.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<float>(normalized_entropy(probs.pixel(i)));
  return RasterImage(probs.width(), probs.height(), 1, std::move(out));
}

double pixel_cross_entropy(const ProbabilityMap& probs, const BinaryMask& gt) {
  require_same_dims(probs.dims(), gt.dims(), "pixel_cross_entropy");
  const auto labels = gt.data();
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= probs.classes()) {
      throw Error(ErrorKind::InvalidArgument, "label outside the probability map's classes");
    }
    sum -= std::log(clamp_probability(probs.pixel(i)[labels[i]]));
  }
  return sum / static_cast<double>(labels.size());
}

double pixel_bce(std::span<const double> pred, std::span<const std::uint8_t> target) {
  if (pred.size() != target.size()) {
    throw Error(ErrorKind::DimensionMismatch, "pixel_bce: prediction and target lengths differ");
  }
  if (pred.empty()) throw Error(ErrorKind::InvalidArgument, "pixel_bce: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = clamp_probability(pred[i]);
    sum -= target[i] ? std::log(p) : std::log(1.0 - p);
  }
  return sum / static_cast<double>(pred.size());
}

double adversarial_objective(double seg_loss, std::span<const double> adv_losses,
                             const AdversarialWeights& weights) {
  const auto& l = weights.lambdas;
  if (l.size() != 1 && l.size() != adv_losses.size()) {
    throw Error(ErrorKind::InvalidArgument, "adversarial weights: expected 1 or " +
                                                std::to_string(adv_losses.size()) + " weights, got " +
                                                std::to_string(l.size()));
  }
  if (std::any_of(l.begin(), l.end(), [](double v) { return !(v >= 0.0); })) {
    throw Error(ErrorKind::InvalidArgument, "adversarial weights must be non-negative");
  }
  double total = seg_loss;
  for (std::size_t i = 0; i < adv_losses.size(); ++i) {
    total += (l.size() == 1 ? l[0] : l[i]) * adv_losses[i];
  }
  return total;
}

FeatureStack::FeatureStack(int channels, int height, int width, std::vector<double> data)
    : channels_(channels), height_(height), width_(width), data_(std::move(data)) {
  if (channels <= 0 || height <= 0 || width <= 0) {
    throw Error(ErrorKind::InvalidArgument, "feature stack extents must be positive");
  }
  if (data_.size() != static_cast<std::size_t>(channels) * height * width) {
    throw Error(ErrorKind::InvalidArgument, "feature stack data length mismatch");
  }
}

GramMatrix gram_matrix(const FeatureStack& features, const BinaryMask* mask) {
  const std::size_t plane = static_cast<std::size_t>(features.width()) * features.height();
  if (mask == nullptr) {
    return gram_of(std::vector<double>(features.data().begin(), features.data().end()), features.channels(), plane);
  }
  require_same_dims(mask->dims(), features.dims(), "gram_matrix: mask vs features");
  return gram_of(masked_features(features, *mask), features.channels(), plane);
}

StyleContentLoss style_content_losses(const FeatureStack& generated, const FeatureStack& style,
                                      const FeatureStack& content, const BinaryMask* mask) {
  require_same_shape(generated, content, "content loss");
  if (generated.channels() != style.channels()) {
    throw Error(ErrorKind::DimensionMismatch, "style loss: channel counts differ");
  }
  const BinaryMask gen_mask = mask ? *mask : full_mask(generated.dims());
  require_same_dims(gen_mask.dims(), generated.dims(), "style_content_losses: mask vs features");
  // The style image may have its own resolution; the mask only applies to it
  // when the extents agree.
  const BinaryMask style_mask = (mask && style.dims() == mask->dims()) ? *mask : full_mask(style.dims());

  const GramMatrix g_gen = gram_matrix(generated, &gen_mask);
  const GramMatrix g_style = gram_matrix(style, &style_mask);
  double style_sum = 0.0;
  for (std::size_t i = 0; i < g_gen.values.size(); ++i) {
    const double d = g_gen.values[i] - g_style.values[i];
    style_sum += d * d;
  }

  const auto gen = masked_features(generated, gen_mask);
  const auto con = masked_features(content, gen_mask);
  double content_sum = 0.0;
  for (std::size_t i = 0; i < gen.size(); ++i) {
    const double d = gen[i] - con[i];
    content_sum += d * d;
  }
  return {style_sum / static_cast<double>(g_gen.values.size()), content_sum / static_cast<double>(gen.size())};
}

}  // namespace smokesynth
