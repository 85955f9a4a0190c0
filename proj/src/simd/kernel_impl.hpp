#pragma once

// Kernel entry points for each instruction set. Deliberately free of inline
// functions and std templates: avx2.cpp is compiled with -mavx2 and must not
// emit comdat code the linker could pick for non-AVX2 callers.

#include <cstddef>
#include <cstdint>

#define SMOKESYNTH_KERNEL_DECLS                                                                   \
  void luminance_rgb(const float* rgb, float* out, std::size_t pixels);                           \
  void blend(const float* fg, const float* bg, const float* alpha, float* out, std::size_t pixels, \
             int channels);                                                                       \
  void multiply_clamp(float* data, std::size_t pixels, const float* factors, int channels);       \
  void threshold_ge(const float* in, std::uint8_t* out, std::size_t n, float tau);                \
  void count_confusion(const std::uint8_t* pred, const std::uint8_t* gt, std::size_t n,           \
                       std::uint64_t counts[4]);                                                  \
  void window_extreme(const std::uint8_t* in, std::uint8_t* out, std::size_t n, int radius,       \
                      bool take_max);                                                             \
  void combine_extreme(std::uint8_t* acc, const std::uint8_t* in, std::size_t n, bool take_max);

namespace smokesynth::simd::scalar {
SMOKESYNTH_KERNEL_DECLS
}

namespace smokesynth::simd::avx2 {
SMOKESYNTH_KERNEL_DECLS
}

#undef SMOKESYNTH_KERNEL_DECLS
