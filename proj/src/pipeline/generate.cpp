#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <optional>

#include "smokesynth/parallel.hpp"
#include "smokesynth/pipeline.hpp"
#include "smokesynth/png_io.hpp"
#include "smokesynth/random.hpp"

namespace smokesynth {
namespace {

using Json = nlohmann::ordered_json;

// Fresh (asset, params) draws tried per index before giving up.
constexpr int kMaxPlacementAttempts = 8;

std::string sample_id(std::uint64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sample_%06llu", static_cast<unsigned long long>(index));
  return buf;
}

// What load_png returns for the stored 8-bit alpha.
AlphaMatte quantized(const AlphaMatte& alpha) {
  std::vector<float> q(alpha.size());
  const auto src = alpha.data();
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = static_cast<float>(quantize_unit(src[i]) / 255.0);
  return AlphaMatte(alpha.width(), alpha.height(), std::move(q));
}

void write_manifest(const fs::path& path, const std::vector<ManifestRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, path.string() + ": cannot open for writing");
  for (const auto& r : records) out << manifest_line(r) << '\n';
  out.flush();
  if (!out) throw Error(ErrorKind::Io, path.string() + ": write failed");
}

template <typename T>
T field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorKind::Parse, std::string("manifest record missing '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::Parse, std::string("manifest field '") + key + "' has the wrong type");
  }
}

}  // namespace

void GenerationConfig::validate() const {
  if (count < 1) throw Error(ErrorKind::InvalidArgument, "count must be >= 1");
  if (!(mask_threshold > 0.0f && mask_threshold < 1.0f)) {
    throw Error(ErrorKind::InvalidArgument, "mask threshold must lie in (0,1)");
  }
  if (workers < 1) throw Error(ErrorKind::InvalidArgument, "workers must be >= 1");
  if (out_dir.empty()) throw Error(ErrorKind::InvalidArgument, "output directory is required");
  ranges.validate();
}

std::string manifest_line(const ManifestRecord& r) {
  const auto& p = r.params;
  Json params = {
      {"scale", p.scale},
      {"width_fraction", p.width_fraction},
      {"flip_horizontal", p.flip_horizontal},
      {"rotation_deg", p.rotation_deg},
      {"tint", {p.tint[0], p.tint[1], p.tint[2]}},
      {"opacity", p.opacity},
      {"anchor", {{"x", p.anchor.x}, {"y", p.anchor.y}}},
  };
  Json j = {
      {"sample_id", r.sample_id},
      {"image_path", r.image_path},
      {"mask_path", r.mask_path},
      {"alpha_path", r.alpha_path},
      {"smoke_source", r.smoke_source},
      {"background_source", r.background_source},
      {"seed", r.seed},
      {"polarity", std::string(to_string(r.polarity))},
      {"params", params},
  };
  return j.dump();
}

ManifestRecord parse_manifest_line(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line.begin(), line.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("malformed manifest line: ") + e.what());
  }
  ManifestRecord r;
  r.sample_id = field<std::string>(j, "sample_id");
  r.image_path = field<std::string>(j, "image_path");
  r.mask_path = field<std::string>(j, "mask_path");
  r.alpha_path = field<std::string>(j, "alpha_path");
  r.smoke_source = field<std::string>(j, "smoke_source");
  r.background_source = field<std::string>(j, "background_source");
  r.seed = field<std::uint64_t>(j, "seed");
  r.polarity = parse_polarity(field<std::string>(j, "polarity"));
  const Json params = field<Json>(j, "params");
  r.params.scale = field<double>(params, "scale");
  r.params.width_fraction = field<double>(params, "width_fraction");
  r.params.flip_horizontal = field<bool>(params, "flip_horizontal");
  r.params.rotation_deg = field<double>(params, "rotation_deg");
  const auto tint = field<std::vector<double>>(params, "tint");
  if (tint.size() != 3) throw Error(ErrorKind::Parse, "manifest tint must have 3 components");
  std::copy(tint.begin(), tint.end(), r.params.tint.begin());
  r.params.opacity = field<double>(params, "opacity");
  const Json anchor = field<Json>(params, "anchor");
  r.params.anchor = {field<int>(anchor, "x"), field<int>(anchor, "y")};
  return r;
}

std::vector<ManifestRecord> read_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, path.string() + ": cannot open manifest");
  std::vector<ManifestRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(parse_manifest_line(line));
  }
  return records;
}

GenerationSummary generate_dataset(const GenerationConfig& config) {
  config.validate();
  const AssetCatalogs catalogs = ingest_assets(config.smoke_dir, config.background_dir);
  return generate_dataset(config, catalogs);
}

GenerationSummary generate_dataset(const GenerationConfig& config, const AssetCatalogs& catalogs) {
  config.validate();
  if (catalogs.smoke.assets.empty() || catalogs.background.assets.empty()) {
    throw Error(ErrorKind::InvalidArgument, "generate: asset catalogs must be non-empty");
  }
  for (const char* sub : {"images", "masks", "alphas"}) {
    std::error_code ec;
    fs::create_directories(config.out_dir / sub, ec);
    if (ec) throw Error(ErrorKind::Io, (config.out_dir / sub).string() + ": " + ec.message());
  }

  const auto& smokes = catalogs.smoke.assets;
  const auto& backgrounds = catalogs.background.assets;
  const std::size_t count = static_cast<std::size_t>(config.count);
  std::vector<std::optional<ManifestRecord>> records(count);
  std::vector<std::size_t> reseeds(count, 0);

  auto produce = [&](std::size_t index) {
    const std::uint64_t sample_seed = derive_seed(config.master_seed, index);
    const Asset* smoke = nullptr;
    const Asset* background = nullptr;
    std::optional<AugmentationParams> params;
    std::uint64_t params_master = config.master_seed;
    for (int attempt = 0; attempt < kMaxPlacementAttempts && !params; ++attempt) {
      Rng pick(derive_seed(sample_seed, static_cast<std::uint64_t>(attempt)));
      smoke = &smokes[pick.below(smokes.size())];
      background = &backgrounds[pick.below(backgrounds.size())];
      params_master = attempt == 0 ? config.master_seed
                                   : derive_seed(config.master_seed, ~static_cast<std::uint64_t>(attempt));
      try {
        params = sample_params(params_master, index, background->image.dims(), smoke->image.dims(), config.ranges);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Infeasible) throw;
        ++reseeds[index];
      }
    }
    if (!params) {
      throw Error(ErrorKind::Infeasible, sample_id(index) + ": no feasible plume placement after " +
                                             std::to_string(kMaxPlacementAttempts) + " asset draws");
    }

    SampleRecipe recipe{smoke->id, background->id, config.polarity, *params, derive_seed(params_master, index)};
    const GeneratedSample sample = generate_sample(recipe, smoke->image, background->image, config.mask_threshold);
    const AlphaMatte stored_alpha = quantized(sample.alpha);
    const BinaryMask mask = derive_mask(stored_alpha, config.mask_threshold);

    ManifestRecord record;
    record.sample_id = sample_id(index);
    record.image_path = "images/" + record.sample_id + ".png";
    record.mask_path = "masks/" + record.sample_id + ".png";
    record.alpha_path = "alphas/" + record.sample_id + ".png";
    record.smoke_source = recipe.smoke_source;
    record.background_source = recipe.background_source;
    record.seed = recipe.seed;
    record.params = recipe.params;
    record.polarity = recipe.polarity;

    save_png(sample.image, config.out_dir / record.image_path);
    save_png(mask, config.out_dir / record.mask_path);
    save_png(stored_alpha, config.out_dir / record.alpha_path);
    records[index] = std::move(record);
  };

  GenerationSummary summary;
  summary.manifest_path = config.out_dir / kManifestName;
  summary.asset_failures = catalogs.smoke.failures;
  summary.asset_failures.insert(summary.asset_failures.end(), catalogs.background.failures.begin(),
                                catalogs.background.failures.end());
  try {
    parallel_for(count, config.workers, produce);
  } catch (const Error& e) {
    std::vector<ManifestRecord> done;
    for (auto& r : records) {
      if (r) done.push_back(*r);
    }
    const fs::path partial = config.out_dir / "manifest.partial.jsonl";
    try {
      write_manifest(partial, done);
    } catch (const Error&) {
      throw Error(e.kind(), std::string(e.what()) + " (partial manifest could not be written)");
    }
    throw Error(e.kind(), std::string(e.what()) + " (partial manifest with " + std::to_string(done.size()) +
                              " records at " + partial.string() + ")");
  }

  summary.records.reserve(count);
  for (auto& r : records) summary.records.push_back(std::move(*r));
  for (std::size_t n : reseeds) summary.reseeds += n;
  write_manifest(summary.manifest_path, summary.records);
  return summary;
}

}  // namespace smokesynth
