#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smokesynth/image.hpp"

namespace smokesynth {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

struct PolygonRegion {
  std::vector<Point2> vertices;

  bool operator==(const PolygonRegion&) const = default;
};

struct RectRegion {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  bool operator==(const RectRegion&) const = default;
};

/// One VIA region in pixel units, as written by the annotator.
using ViaRegion = std::variant<PolygonRegion, RectRegion>;

struct ViaEntry {
  /// Key of the entry in the VIA metadata map (usually filename + size).
  std::string key;
  std::string filename;
  std::vector<ViaRegion> regions;
  /// Present when the entry carries width/height attributes.
  std::optional<Dims> dims;
  /// Unsupported shapes by VIA shape name, plus "degenerate_polygon".
  std::map<std::string, std::size_t> skipped_shapes;

  bool operator==(const ViaEntry&) const = default;
};

struct ViaProject {
  /// Entries in file order.
  std::vector<ViaEntry> entries;
  std::map<std::string, std::size_t> skipped_shapes;

  const ViaEntry* find(std::string_view filename) const;
  std::size_t region_count() const;

  bool operator==(const ViaProject&) const = default;
};

/// Parses a VIA 2 project (object with `_via_img_metadata`) or a bare
/// metadata map. Keeps polygon and rect regions and counts everything else
/// as skipped. Throws Error(Parse) on malformed JSON, missing keys (naming the
/// entry) or duplicate filenames.
ViaProject parse_via(std::string_view json_text);

/// Serializes the supported subset back to a VIA 2 project document.
std::string to_via_json(const ViaProject& project);

/// Union of all regions. Pixel (i,j) is sampled at its centre (i+0.5, j+0.5);
/// polygons use the even-odd rule, rects cover x <= i+0.5 < x+w (and the
/// same in y). Coverage outside the frame is clipped.
BinaryMask rasterize(std::span<const ViaRegion> regions, Dims dims);

/// Even-odd test of a single point, the per-pixel reference for rasterize.
bool point_in_polygon(const PolygonRegion& polygon, double x, double y);

struct MaskExportSummary {
  std::size_t written = 0;
  std::size_t empty = 0;
  std::map<std::string, std::size_t> skipped_shapes;
  /// Set-pixel count per written mask, keyed by image filename.
  std::map<std::string, std::size_t> set_pixels;
  /// "filename: reason" for entries that could not be written.
  std::vector<std::string> failures;
};

using DimsLookup = std::function<std::optional<Dims>(const std::string& filename)>;

/// Writes `<stem>.png` into out_dir for every entry. Entry dims take
/// precedence over the lookup. Per-file failures are collected and the rest
/// of the project still processes.
MaskExportSummary project_to_masks(const ViaProject& project, const DimsLookup& dims_lookup,
                                   const std::filesystem::path& out_dir, int workers = 1);

}  // namespace smokesynth
