#include "kernel_impl.hpp"

namespace smokesynth::simd::scalar {

void luminance_rgb(const float* rgb, float* out, std::size_t pixels) {
  for (std::size_t i = 0; i < pixels; ++i) {
    const float* p = rgb + 3 * i;
    out[i] = (0.299f * p[0] + 0.587f * p[1]) + 0.114f * p[2];
  }
}

void blend(const float* fg, const float* bg, const float* alpha, float* out, std::size_t pixels,
           int channels) {
  for (std::size_t i = 0; i < pixels; ++i) {
    const float a = alpha[i];
    const float inv = 1.0f - a;
    for (int c = 0; c < channels; ++c) {
      const std::size_t k = i * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c);
      const float f = fg[k];
      const float b = bg[k];
      // Same select semantics as minps/maxps so the SIMD variants agree on
      // signed zeros too.
      const float lo = f < b ? f : b;
      const float hi = f > b ? f : b;
      float v = a * f + inv * b;
      v = v > lo ? v : lo;
      v = v < hi ? v : hi;
      out[k] = v;
    }
  }
}

void multiply_clamp(float* data, std::size_t pixels, const float* factors, int channels) {
  for (std::size_t i = 0; i < pixels; ++i) {
    for (int c = 0; c < channels; ++c) {
      float& v = data[i * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)];
      float r = v * factors[c];
      r = r > 0.0f ? r : 0.0f;
      r = r < 1.0f ? r : 1.0f;
      v = r;
    }
  }
}

void threshold_ge(const float* in, std::uint8_t* out, std::size_t n, float tau) {
  for (std::size_t i = 0; i < n; ++i) out[i] = in[i] >= tau ? 1 : 0;
}

void count_confusion(const std::uint8_t* pred, const std::uint8_t* gt, std::size_t n,
                     std::uint64_t counts[4]) {
  for (std::size_t i = 0; i < n; ++i) {
    const bool p = pred[i] != 0;
    const bool g = gt[i] != 0;
    if (p && g) {
      ++counts[0];
    } else if (p) {
      ++counts[1];
    } else if (g) {
      ++counts[2];
    } else {
      ++counts[3];
    }
  }
}

void window_extreme(const std::uint8_t* in, std::uint8_t* out, std::size_t n, int radius,
                    bool take_max) {
  const std::size_t r = static_cast<std::size_t>(radius);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= r ? i - r : 0;
    const std::size_t hi = i + r < n ? i + r : n - 1;
    std::uint8_t v = in[lo];
    for (std::size_t k = lo + 1; k <= hi; ++k) {
      if (take_max ? in[k] > v : in[k] < v) v = in[k];
    }
    out[i] = v;
  }
}

void combine_extreme(std::uint8_t* acc, const std::uint8_t* in, std::size_t n, bool take_max) {
  for (std::size_t i = 0; i < n; ++i) {
    if (take_max ? in[i] > acc[i] : in[i] < acc[i]) acc[i] = in[i];
  }
}

}  // namespace smokesynth::simd::scalar
