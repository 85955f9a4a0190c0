// Compiled with -mavx2 (no FMA): every lane performs the same IEEE
// operations, in the same order, as the scalar kernels.

#include <immintrin.h>

#include "kernel_impl.hpp"

namespace smokesynth::simd::avx2 {
namespace {

std::uint8_t extreme_at(const std::uint8_t* in, std::size_t n, std::size_t i, std::size_t r,
                        bool take_max) {
  const std::size_t lo = i >= r ? i - r : 0;
  const std::size_t hi = i + r < n ? i + r : n - 1;
  std::uint8_t v = in[lo];
  for (std::size_t k = lo + 1; k <= hi; ++k) {
    if (take_max ? in[k] > v : in[k] < v) v = in[k];
  }
  return v;
}

inline __m256 blend8(__m256 a, __m256 f, __m256 b) {
  const __m256 inv = _mm256_sub_ps(_mm256_set1_ps(1.0f), a);
  const __m256 lo = _mm256_min_ps(f, b);
  const __m256 hi = _mm256_max_ps(f, b);
  __m256 v = _mm256_add_ps(_mm256_mul_ps(a, f), _mm256_mul_ps(inv, b));
  v = _mm256_max_ps(v, lo);
  return _mm256_min_ps(v, hi);
}

inline __m256 clamp_unit(__m256 v) {
  v = _mm256_max_ps(v, _mm256_setzero_ps());
  return _mm256_min_ps(v, _mm256_set1_ps(1.0f));
}

}  // namespace

void luminance_rgb(const float* rgb, float* out, std::size_t pixels) {
  const __m256i idx = _mm256_setr_epi32(0, 3, 6, 9, 12, 15, 18, 21);
  const __m256 wr = _mm256_set1_ps(0.299f);
  const __m256 wg = _mm256_set1_ps(0.587f);
  const __m256 wb = _mm256_set1_ps(0.114f);
  std::size_t i = 0;
  for (; i + 8 <= pixels; i += 8) {
    const float* p = rgb + 3 * i;
    const __m256 r = _mm256_i32gather_ps(p, idx, 4);
    const __m256 g = _mm256_i32gather_ps(p + 1, idx, 4);
    const __m256 b = _mm256_i32gather_ps(p + 2, idx, 4);
    const __m256 l = _mm256_add_ps(_mm256_add_ps(_mm256_mul_ps(wr, r), _mm256_mul_ps(wg, g)),
                                   _mm256_mul_ps(wb, b));
    _mm256_storeu_ps(out + i, l);
  }
  scalar::luminance_rgb(rgb + 3 * i, out + i, pixels - i);
}

void blend(const float* fg, const float* bg, const float* alpha, float* out, std::size_t pixels,
           int channels) {
  std::size_t i = 0;
  if (channels == 1) {
    for (; i + 8 <= pixels; i += 8) {
      const __m256 v = blend8(_mm256_loadu_ps(alpha + i), _mm256_loadu_ps(fg + i), _mm256_loadu_ps(bg + i));
      _mm256_storeu_ps(out + i, v);
    }
  } else if (channels == 3) {
    // Spread 8 per-pixel alphas over 24 interleaved samples.
    const __m256i spread0 = _mm256_setr_epi32(0, 0, 0, 1, 1, 1, 2, 2);
    const __m256i spread1 = _mm256_setr_epi32(2, 3, 3, 3, 4, 4, 4, 5);
    const __m256i spread2 = _mm256_setr_epi32(5, 5, 6, 6, 6, 7, 7, 7);
    for (; i + 8 <= pixels; i += 8) {
      const __m256 a = _mm256_loadu_ps(alpha + i);
      const std::size_t k = 3 * i;
      _mm256_storeu_ps(out + k, blend8(_mm256_permutevar8x32_ps(a, spread0), _mm256_loadu_ps(fg + k),
                                       _mm256_loadu_ps(bg + k)));
      _mm256_storeu_ps(out + k + 8, blend8(_mm256_permutevar8x32_ps(a, spread1),
                                           _mm256_loadu_ps(fg + k + 8), _mm256_loadu_ps(bg + k + 8)));
      _mm256_storeu_ps(out + k + 16, blend8(_mm256_permutevar8x32_ps(a, spread2),
                                            _mm256_loadu_ps(fg + k + 16), _mm256_loadu_ps(bg + k + 16)));
    }
  }
  const std::size_t k = i * static_cast<std::size_t>(channels);
  scalar::blend(fg + k, bg + k, alpha + i, out + k, pixels - i, channels);
}

void multiply_clamp(float* data, std::size_t pixels, const float* factors, int channels) {
  std::size_t i = 0;
  if (channels == 1) {
    const __m256 f = _mm256_set1_ps(factors[0]);
    for (; i + 8 <= pixels; i += 8) {
      _mm256_storeu_ps(data + i, clamp_unit(_mm256_mul_ps(_mm256_loadu_ps(data + i), f)));
    }
  } else if (channels == 3) {
    const float f0 = factors[0], f1 = factors[1], f2 = factors[2];
    const __m256 p0 = _mm256_setr_ps(f0, f1, f2, f0, f1, f2, f0, f1);
    const __m256 p1 = _mm256_setr_ps(f2, f0, f1, f2, f0, f1, f2, f0);
    const __m256 p2 = _mm256_setr_ps(f1, f2, f0, f1, f2, f0, f1, f2);
    for (; i + 8 <= pixels; i += 8) {
      float* d = data + 3 * i;
      _mm256_storeu_ps(d, clamp_unit(_mm256_mul_ps(_mm256_loadu_ps(d), p0)));
      _mm256_storeu_ps(d + 8, clamp_unit(_mm256_mul_ps(_mm256_loadu_ps(d + 8), p1)));
      _mm256_storeu_ps(d + 16, clamp_unit(_mm256_mul_ps(_mm256_loadu_ps(d + 16), p2)));
    }
  }
  scalar::multiply_clamp(data + i * static_cast<std::size_t>(channels), pixels - i, factors, channels);
}

void threshold_ge(const float* in, std::uint8_t* out, std::size_t n, float tau) {
  const __m256 t = _mm256_set1_ps(tau);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const int bits = _mm256_movemask_ps(_mm256_cmp_ps(_mm256_loadu_ps(in + i), t, _CMP_GE_OQ));
    for (int b = 0; b < 8; ++b) out[i + b] = static_cast<std::uint8_t>((bits >> b) & 1);
  }
  scalar::threshold_ge(in + i, out + i, n - i, tau);
}

void count_confusion(const std::uint8_t* pred, const std::uint8_t* gt, std::size_t n,
                     std::uint64_t counts[4]) {
  const __m256i zero = _mm256_setzero_si256();
  std::uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i p = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(pred + i));
    const __m256i g = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(gt + i));
    const unsigned mp = ~static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(p, zero)));
    const unsigned mg = ~static_cast<unsigned>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(g, zero)));
    tp += static_cast<unsigned>(__builtin_popcount(mp & mg));
    fp += static_cast<unsigned>(__builtin_popcount(mp & ~mg));
    fn += static_cast<unsigned>(__builtin_popcount(~mp & mg));
    tn += static_cast<unsigned>(__builtin_popcount(~mp & ~mg));
  }
  counts[0] += tp;
  counts[1] += fp;
  counts[2] += fn;
  counts[3] += tn;
  scalar::count_confusion(pred + i, gt + i, n - i, counts);
}

void window_extreme(const std::uint8_t* in, std::uint8_t* out, std::size_t n, int radius,
                    bool take_max) {
  const std::size_t r = static_cast<std::size_t>(radius);
  std::size_t i = 0;
  for (; i < n && i < r; ++i) out[i] = extreme_at(in, n, i, r, take_max);
  // Full windows only: [i - r, i + 31 + r] must lie inside [0, n).
  for (; i + 32 + r <= n; i += 32) {
    const std::uint8_t* base = in + (i - r);
    __m256i acc = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(base));
    for (std::size_t k = 1; k <= 2 * r; ++k) {
      const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(base + k));
      acc = take_max ? _mm256_max_epu8(acc, v) : _mm256_min_epu8(acc, v);
    }
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), acc);
  }
  for (; i < n; ++i) out[i] = extreme_at(in, n, i, r, take_max);
}

void combine_extreme(std::uint8_t* acc, const std::uint8_t* in, std::size_t n, bool take_max) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(acc + i));
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(acc + i),
                        take_max ? _mm256_max_epu8(a, v) : _mm256_min_epu8(a, v));
  }
  scalar::combine_extreme(acc + i, in + i, n - i, take_max);
}

}  // namespace smokesynth::simd::avx2
