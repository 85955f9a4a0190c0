#include <algorithm>
#include <cmath>
#include <vector>

#include "smokesynth/annotations.hpp"
#include "smokesynth/parallel.hpp"
#include "smokesynth/png_io.hpp"

namespace smokesynth {
namespace {

// x where edge (a,b) crosses the horizontal line at y. Written exactly as in
// point_in_polygon so both paths round identically.
double crossing_x(const Point2& a, const Point2& b, double y) {
  return (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x;
}

void fill_polygon(const PolygonRegion& polygon, BinaryMask& mask) {
  const auto& v = polygon.vertices;
  if (v.size() < 3) return;
  std::vector<double> crossings;
  for (int j = 0; j < mask.height(); ++j) {
    const double y = j + 0.5;
    crossings.clear();
    for (std::size_t i = 0, k = v.size() - 1; i < v.size(); k = i++) {
      if ((v[i].y > y) != (v[k].y > y)) crossings.push_back(crossing_x(v[i], v[k], y));
    }
    if (crossings.empty()) continue;
    std::sort(crossings.begin(), crossings.end());
    // Inside iff an odd number of crossings lie strictly right of the centre.
    auto row = mask.row(j);
    std::size_t passed = 0;
    for (int i = 0; i < mask.width(); ++i) {
      const double x = i + 0.5;
      while (passed < crossings.size() && crossings[passed] <= x) ++passed;
      if ((crossings.size() - passed) & 1u) row[i] = 1;
    }
  }
}

void fill_rect(const RectRegion& rect, BinaryMask& mask) {
  const auto covered = [](double lo, double extent, int i) {
    const double c = i + 0.5;
    return lo <= c && c < lo + extent;
  };
  // Candidate index window, one pixel wider than the extent on each side.
  const auto first = [](double start, int limit) {
    return static_cast<int>(std::clamp(std::floor(start) - 1.0, 0.0, static_cast<double>(limit)));
  };
  const auto last = [](double end, int limit) {
    return static_cast<int>(std::clamp(std::ceil(end) + 1.0, 0.0, static_cast<double>(limit)));
  };
  const int i0 = first(rect.x, mask.width());
  const int i1 = last(rect.x + rect.width, mask.width());
  const int j0 = first(rect.y, mask.height());
  const int j1 = last(rect.y + rect.height, mask.height());
  for (int j = j0; j < j1; ++j) {
    if (!covered(rect.y, rect.height, j)) continue;
    for (int i = i0; i < i1; ++i) {
      if (covered(rect.x, rect.width, i)) mask.at(i, j) = 1;
    }
  }
}

}  // namespace

bool point_in_polygon(const PolygonRegion& polygon, double x, double y) {
  const auto& v = polygon.vertices;
  if (v.size() < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, k = v.size() - 1; i < v.size(); k = i++) {
    if (((v[i].y > y) != (v[k].y > y)) && (x < crossing_x(v[i], v[k], y))) inside = !inside;
  }
  return inside;
}

BinaryMask rasterize(std::span<const ViaRegion> regions, Dims dims) {
  BinaryMask mask(dims.width, dims.height);
  for (const auto& region : regions) {
    if (const auto* rect = std::get_if<RectRegion>(&region)) {
      fill_rect(*rect, mask);
    } else {
      fill_polygon(std::get<PolygonRegion>(region), mask);
    }
  }
  return mask;
}

MaskExportSummary project_to_masks(const ViaProject& project, const DimsLookup& dims_lookup,
                                   const std::filesystem::path& out_dir, int workers) {
  struct Outcome {
    bool written = false;
    std::size_t set_pixels = 0;
    std::string failure;
  };
  std::vector<Outcome> outcomes(project.entries.size());

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);

  parallel_for(project.entries.size(), workers, [&](std::size_t i) {
    const ViaEntry& entry = project.entries[i];
    Outcome& out = outcomes[i];
    try {
      std::optional<Dims> dims = entry.dims;
      if (!dims && dims_lookup) dims = dims_lookup(entry.filename);
      if (!dims) {
        out.failure = entry.filename + ": image dimensions unresolved";
        return;
      }
      const BinaryMask mask = rasterize(entry.regions, *dims);
      const auto d = mask.data();
      out.set_pixels = static_cast<std::size_t>(std::count(d.begin(), d.end(), std::uint8_t{1}));
      const auto stem = std::filesystem::path(entry.filename).stem();
      save_png(mask, out_dir / (stem.string() + ".png"));
      out.written = true;
    } catch (const std::exception& e) {
      out.failure = entry.filename + ": " + e.what();
    }
  });

  MaskExportSummary summary;
  summary.skipped_shapes = project.skipped_shapes;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.written) {
      summary.failures.push_back(o.failure);
      continue;
    }
    ++summary.written;
    if (o.set_pixels == 0) ++summary.empty;
    summary.set_pixels[project.entries[i].filename] = o.set_pixels;
  }
  return summary;
}

}  // namespace smokesynth
