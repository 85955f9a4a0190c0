#include "smokesynth/split.hpp"

#include <cmath>
#include <utility>

#include "smokesynth/error.hpp"
#include "smokesynth/random.hpp"

namespace smokesynth {

DatasetSplit split_dataset(std::span<const std::string> ids, double fraction, std::uint64_t seed) {
  if (ids.empty()) throw Error(ErrorKind::InvalidArgument, "split: empty id list");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "split: fraction must lie in (0,1)");
  }
  std::vector<std::string> shuffled(ids.begin(), ids.end());
  Rng rng(mix64(seed));
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(shuffled[i - 1], shuffled[j]);
  }
  // The 1e-9 slack keeps products such as 0.29 * 100 from flooring to 28.
  const auto train_count = static_cast<std::size_t>(std::floor(fraction * shuffled.size() + 1e-9));
  DatasetSplit split;
  split.train.assign(shuffled.begin(), shuffled.begin() + train_count);
  split.eval.assign(shuffled.begin() + train_count, shuffled.end());
  return split;
}

}  // namespace smokesynth
