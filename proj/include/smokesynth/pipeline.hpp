#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "smokesynth/annotations.hpp"
#include "smokesynth/compositor.hpp"
#include "smokesynth/matting.hpp"
#include "smokesynth/metrics.hpp"

namespace smokesynth {

namespace fs = std::filesystem;

/// `*.png` (any case) files directly inside `dir`, sorted by filename bytes.
std::vector<fs::path> list_pngs(const fs::path& dir);

struct Asset {
  /// Filename within its directory; stable across runs and platforms.
  std::string id;
  fs::path path;
  RasterImage image;
};

struct AssetCatalog {
  std::vector<Asset> assets;
  /// "filename: reason" for files that failed to decode.
  std::vector<std::string> failures;
};

AssetCatalog scan_assets(const fs::path& dir);

struct AssetCatalogs {
  AssetCatalog smoke;
  AssetCatalog background;
};

/// Throws InvalidArgument when either catalog ends up empty.
AssetCatalogs ingest_assets(const fs::path& smoke_dir, const fs::path& background_dir);

struct GenerationConfig {
  fs::path smoke_dir;
  fs::path background_dir;
  fs::path out_dir;
  std::uint64_t count = 1;
  std::uint64_t master_seed = 0;
  BackgroundPolarity polarity = BackgroundPolarity::White;
  float mask_threshold = kDefaultMaskThreshold;
  AugmentationRanges ranges;
  int workers = 1;

  void validate() const;
};

struct ManifestRecord {
  std::string sample_id;
  std::string image_path;
  std::string mask_path;
  std::string alpha_path;
  std::string smoke_source;
  std::string background_source;
  std::uint64_t seed = 0;
  AugmentationParams params;
  BackgroundPolarity polarity = BackgroundPolarity::White;

  bool operator==(const ManifestRecord&) const = default;
};

/// One compact JSON object, no trailing newline.
std::string manifest_line(const ManifestRecord& record);
ManifestRecord parse_manifest_line(std::string_view line);
std::vector<ManifestRecord> read_manifest(const fs::path& path);

inline constexpr const char* kManifestName = "manifest.jsonl";

struct GenerationSummary {
  std::vector<ManifestRecord> records;
  /// Placement retries that needed a fresh asset draw.
  std::size_t reseeds = 0;
  fs::path manifest_path;
  std::vector<std::string> asset_failures;
};

/// Writes images/, masks/, alphas/ and manifest.jsonl under out_dir. Sample
/// i depends only on (master_seed, i) and the catalogs, so the output tree is
/// identical for every worker count. Masks are thresholded from the 8-bit
/// alpha that is stored, so re-deriving them from disk reproduces them.
GenerationSummary generate_dataset(const GenerationConfig& config);
GenerationSummary generate_dataset(const GenerationConfig& config, const AssetCatalogs& catalogs);

/// Parses the VIA file, resolves image sizes from PNG headers in images_dir
/// and writes one mask per entry.
MaskExportSummary import_annotations(const fs::path& via_json, const fs::path& images_dir,
                                     const fs::path& out_dir, int workers = 1);

struct EvaluateOptions {
  /// Byte threshold for soft predictions (pixel >= threshold is smoke).
  int pred_threshold = 128;
  int gt_threshold = 128;
  /// Defaults to the prediction directory name when empty.
  std::string run_name;
};

/// Pairs same-named PNGs. Unmatched names and per-pair dimension mismatches
/// are recorded in the report; throws when no pair is usable.
EvalReport evaluate_directories(const fs::path& pred_dir, const fs::path& gt_dir,
                                const EvaluateOptions& options = {});

/// Writes the JSON report to `path` and the text table next to it with a
/// .txt extension (or .json, when `path` itself ends in .txt).
void write_report(const EvalReport& report, const fs::path& path);

/// sample_id of every record for *.jsonl manifests; otherwise one id per
/// non-blank line.
std::vector<std::string> read_id_list(const fs::path& path);

struct SplitOutput {
  fs::path train_path;
  fs::path eval_path;
  std::size_t train_count = 0;
  std::size_t eval_count = 0;
};

/// Writes train.txt and eval.txt into out_dir.
SplitOutput split_id_file(const fs::path& input, double fraction, std::uint64_t seed, const fs::path& out_dir);

enum class TrimapSource { Alpha, Mask };

TrimapSource parse_trimap_source(std::string_view text);

struct TrimapJob {
  TrimapSource source = TrimapSource::Alpha;
  TrimapThresholds thresholds;
  int erode_radius = kDefaultErodeRadius;
  int workers = 1;
};

struct TrimapSummary {
  std::size_t written = 0;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
};

/// One {0,128,255} trimap PNG per input PNG, same filename.
TrimapSummary make_trimaps(const fs::path& input_dir, const fs::path& out_dir, const TrimapJob& job);

/// Loads foreground, alpha and background PNGs, applies matte_composite and
/// saves the result. Gray images are broadcast to RGB.
void composite_files(const fs::path& foreground, const fs::path& alpha, const fs::path& background,
                     const fs::path& out);

}  // namespace smokesynth
