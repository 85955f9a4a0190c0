#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace smokesynth::simd {

enum class Level { Scalar, Avx2 };

/// Inner loops shared by the imaging modules. Every entry of every table
/// produces bit-identical output for identical input; the SIMD tables only
/// change speed.
struct KernelTable {
  Level level;

  /// out[i] = 0.299 r + 0.587 g + 0.114 b over interleaved RGB.
  void (*luminance_rgb)(const float* rgb, float* out, std::size_t pixels);

  /// out = clamp(a*fg + (1-a)*bg, min(fg,bg), max(fg,bg)) per channel, with
  /// one alpha per pixel. `channels` is 1 or 3.
  void (*blend)(const float* fg, const float* bg, const float* alpha, float* out,
                std::size_t pixels, int channels);

  /// data = clamp(data * factors[c], 0, 1); `factors` has `channels` entries.
  void (*multiply_clamp)(float* data, std::size_t pixels, const float* factors, int channels);

  /// out[i] = in[i] >= tau ? 1 : 0.
  void (*threshold_ge)(const float* in, std::uint8_t* out, std::size_t n, float tau);

  /// Tallies nonzero/zero agreement: counts = {tp, fp, fn, tn} with pred as
  /// the first argument. Counts are accumulated, not reset.
  void (*count_confusion)(const std::uint8_t* pred, const std::uint8_t* gt, std::size_t n,
                          std::uint64_t counts[4]);

  /// 1-D sliding max (take_max) or min over [i-radius, i+radius] clipped to
  /// [0, n).
  void (*window_extreme)(const std::uint8_t* in, std::uint8_t* out, std::size_t n, int radius,
                         bool take_max);

  /// acc[i] = max(acc[i], in[i]) or min.
  void (*combine_extreme)(std::uint8_t* acc, const std::uint8_t* in, std::size_t n, bool take_max);
};

const KernelTable& scalar_kernels() noexcept;

/// nullptr when the build has no AVX2 variant or the CPU lacks AVX2.
const KernelTable* avx2_kernels() noexcept;

/// Table used by the library. Chosen on first use: the best available level,
/// unless SMOKESYNTH_SIMD=scalar|avx2 is set in the environment.
const KernelTable& active() noexcept;

/// Overrides the active table. Throws Error(InvalidArgument) when the level
/// is unavailable on this machine.
void select(Level level);

bool available(Level level) noexcept;

std::string_view to_string(Level level) noexcept;

/// Parses "scalar" / "avx2"; "auto" maps to the best available level.
Level parse_level(std::string_view text);

}  // namespace smokesynth::simd
