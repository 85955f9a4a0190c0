#include <algorithm>
#include <cctype>
#include <optional>

#include "smokesynth/pipeline.hpp"
#include "smokesynth/png_io.hpp"

namespace smokesynth {

std::vector<fs::path> list_pngs(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorKind::Io, dir.string() + ": not a readable directory");
  }
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return out;
}

AssetCatalog scan_assets(const fs::path& dir) {
  const auto files = list_pngs(dir);
  std::vector<std::optional<RasterImage>> images(files.size());
  std::vector<std::string> errors(files.size());
  for (std::size_t i = 0; i < files.size(); ++i) {
    try {
      images[i] = load_png(files[i]);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  }
  AssetCatalog catalog;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (images[i]) {
      catalog.assets.push_back({files[i].filename().string(), files[i], std::move(*images[i])});
    } else {
      catalog.failures.push_back(errors[i]);
    }
  }
  return catalog;
}

AssetCatalogs ingest_assets(const fs::path& smoke_dir, const fs::path& background_dir) {
  AssetCatalogs catalogs{scan_assets(smoke_dir), scan_assets(background_dir)};
  if (catalogs.smoke.assets.empty()) {
    throw Error(ErrorKind::InvalidArgument, smoke_dir.string() + ": no usable smoke PNGs");
  }
  if (catalogs.background.assets.empty()) {
    throw Error(ErrorKind::InvalidArgument, background_dir.string() + ": no usable background PNGs");
  }
  return catalogs;
}

}  // namespace smokesynth
