#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace smokesynth {

struct DatasetSplit {
  std::vector<std::string> train;
  std::vector<std::string> eval;
};

/// Seeded Fisher-Yates shuffle, then the first floor(fraction * N) ids go to
/// train. fraction must lie in (0,1); ids must be non-empty.
DatasetSplit split_dataset(std::span<const std::string> ids, double fraction, std::uint64_t seed);

}  // namespace smokesynth
