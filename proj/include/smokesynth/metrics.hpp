#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smokesynth/image.hpp"

namespace smokesynth {

enum class SegClass { Background = 0, Smoke = 1 };

inline constexpr std::array<SegClass, 2> kSegClasses{SegClass::Background, SegClass::Smoke};

const char* to_string(SegClass c) noexcept;

struct ClassCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  bool operator==(const ClassCounts&) const = default;
};

/// Pixel tallies with smoke as the positive class. Background counts are the
/// mirror image (tp<->tn, fp<->fn).
struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  ClassCounts counts(SegClass c) const noexcept;
  std::uint64_t total() const noexcept { return tp + fp + fn + tn; }

  ConfusionMatrix& operator+=(const ConfusionMatrix& other) noexcept;
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion(const BinaryMask& pred, const BinaryMask& gt);

/// tp / (tp + fp + fn); nullopt when the class is absent from both pred and
/// gt.
std::optional<double> iou(const ConfusionMatrix& cm, SegClass c);

struct ImageScore {
  std::string name;
  ConfusionMatrix confusion;
  std::array<std::optional<double>, 2> class_iou;
};

/// Dataset-level summary. IoU is computed on the confusion accumulated over
/// every image; classes with an undefined IoU are left out of the mean.
struct EvalReport {
  std::string run_name;
  std::vector<ImageScore> images;
  ConfusionMatrix total;
  std::array<std::optional<double>, 2> class_iou;
  /// Unrounded mean IoU in [0,1].
  double mean_iou = 0.0;
  /// 100 * mean_iou rounded to two decimals.
  double miou_percent = 0.0;
  /// Ground-truth pixel count per class.
  std::array<std::uint64_t, 2> gt_pixels{};
  std::vector<std::string> unmatched;
  std::vector<std::string> errors;

  std::size_t image_count() const noexcept { return images.size(); }
};

struct MaskPair {
  std::string name;
  const BinaryMask* pred = nullptr;
  const BinaryMask* gt = nullptr;
};

/// Throws InvalidArgument on empty input, DimensionMismatch naming the pair
/// otherwise.
EvalReport mean_iou(std::span<const MaskPair> pairs, std::string run_name = "run");

/// Rounds to two decimals, half away from zero.
double round_percent(double fraction) noexcept;

/// "Model | mIoU" table, one row per run, mIoU with two decimals.
std::string format_miou_table(std::span<const std::pair<std::string, double>> rows);

/// The table for this report followed by the per-class breakdown.
std::string format_report_text(const EvalReport& report);

std::string report_to_json(const EvalReport& report);

}  // namespace smokesynth
