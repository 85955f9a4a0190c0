#include <atomic>
#include <cstdlib>
#include <string>

#include "kernel_impl.hpp"
#include "smokesynth/error.hpp"
#include "smokesynth/simd/kernels.hpp"

namespace smokesynth::simd {
namespace {

constexpr KernelTable kScalarTable{
    Level::Scalar,          scalar::luminance_rgb,   scalar::blend,          scalar::multiply_clamp,
    scalar::threshold_ge,   scalar::count_confusion, scalar::window_extreme, scalar::combine_extreme,
};

#if defined(SMOKESYNTH_HAVE_AVX2)
constexpr KernelTable kAvx2Table{
    Level::Avx2,          avx2::luminance_rgb,   avx2::blend,          avx2::multiply_clamp,
    avx2::threshold_ge,   avx2::count_confusion, avx2::window_extreme, avx2::combine_extreme,
};
#endif

bool cpu_has_avx2() noexcept {
#if defined(SMOKESYNTH_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* best_table() noexcept {
  if (const KernelTable* t = avx2_kernels()) return t;
  return &kScalarTable;
}

const KernelTable* initial_table() noexcept {
  const char* env = std::getenv("SMOKESYNTH_SIMD");
  if (env != nullptr) {
    const std::string value(env);
    if (value == "scalar") return &kScalarTable;
    if (value == "avx2" && avx2_kernels() != nullptr) return avx2_kernels();
  }
  return best_table();
}

std::atomic<const KernelTable*>& current() noexcept {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& scalar_kernels() noexcept { return kScalarTable; }

const KernelTable* avx2_kernels() noexcept {
#if defined(SMOKESYNTH_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_acquire); }

bool available(Level level) noexcept {
  return level == Level::Scalar || (level == Level::Avx2 && avx2_kernels() != nullptr);
}

void select(Level level) {
  if (!available(level)) {
    throw Error(ErrorKind::InvalidArgument,
                "SIMD level '" + std::string(to_string(level)) + "' is not available on this machine");
  }
  current().store(level == Level::Avx2 ? avx2_kernels() : &kScalarTable, std::memory_order_release);
}

std::string_view to_string(Level level) noexcept {
  switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
  }
  return "unknown";
}

Level parse_level(std::string_view text) {
  if (text == "scalar") return Level::Scalar;
  if (text == "avx2") return Level::Avx2;
  if (text == "auto") return best_table()->level;
  throw Error(ErrorKind::InvalidArgument, "unknown SIMD level '" + std::string(text) + "'");
}

}  // namespace smokesynth::simd
