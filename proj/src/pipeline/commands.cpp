#include <json.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "smokesynth/color.hpp"
#include "smokesynth/parallel.hpp"
#include "smokesynth/pipeline.hpp"
#include "smokesynth/png_io.hpp"
#include "smokesynth/split.hpp"

namespace smokesynth {
namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, path.string() + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, path.string() + ": write failed");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, dir.string() + ": " + ec.message());
}

std::map<std::string, fs::path> by_filename(const fs::path& dir) {
  std::map<std::string, fs::path> out;
  for (const auto& p : list_pngs(dir)) out.emplace(p.filename().string(), p);
  return out;
}

}  // namespace

MaskExportSummary import_annotations(const fs::path& via_json, const fs::path& images_dir,
                                     const fs::path& out_dir, int workers) {
  const ViaProject project = parse_via(read_text(via_json));
  ensure_dir(out_dir);
  const DimsLookup lookup = [&](const std::string& filename) -> std::optional<Dims> {
    const fs::path image = images_dir / filename;
    std::error_code ec;
    if (!fs::exists(image, ec)) return std::nullopt;
    try {
      return png_dimensions(image);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  return project_to_masks(project, lookup, out_dir, workers);
}

EvalReport evaluate_directories(const fs::path& pred_dir, const fs::path& gt_dir, const EvaluateOptions& options) {
  const auto preds = by_filename(pred_dir);
  const auto gts = by_filename(gt_dir);

  std::vector<std::string> unmatched;
  for (const auto& [name, _] : preds) {
    if (!gts.count(name)) unmatched.push_back("prediction only: " + name);
  }
  for (const auto& [name, _] : gts) {
    if (!preds.count(name)) unmatched.push_back("ground truth only: " + name);
  }

  std::vector<std::string> names;
  std::vector<BinaryMask> pred_masks;
  std::vector<BinaryMask> gt_masks;
  std::vector<std::string> errors;
  for (const auto& [name, pred_path] : preds) {
    const auto gt = gts.find(name);
    if (gt == gts.end()) continue;
    try {
      BinaryMask p = mask_from_image(load_png(pred_path), options.pred_threshold);
      BinaryMask g = mask_from_image(load_png(gt->second), options.gt_threshold);
      if (p.dims() != g.dims()) {
        errors.push_back(name + ": prediction " + std::to_string(p.width()) + "x" + std::to_string(p.height()) +
                         " vs ground truth " + std::to_string(g.width()) + "x" + std::to_string(g.height()));
        continue;
      }
      names.push_back(name);
      pred_masks.push_back(std::move(p));
      gt_masks.push_back(std::move(g));
    } catch (const Error& e) {
      errors.push_back(name + ": " + e.what());
    }
  }
  if (names.empty()) {
    throw Error(ErrorKind::InvalidArgument,
                "evaluate: no usable prediction/ground-truth pairs between " + pred_dir.string() + " and " +
                    gt_dir.string());
  }

  std::vector<MaskPair> pairs;
  for (std::size_t i = 0; i < names.size(); ++i) pairs.push_back({names[i], &pred_masks[i], &gt_masks[i]});
  std::string run = options.run_name;
  if (run.empty()) {
    run = pred_dir.filename().string();
    if (run.empty()) run = pred_dir.parent_path().filename().string();
    if (run.empty()) run = "run";
  }
  EvalReport report = mean_iou(pairs, run);
  report.unmatched = std::move(unmatched);
  report.errors = std::move(errors);
  return report;
}

void write_report(const EvalReport& report, const fs::path& path) {
  fs::path json_path = path;
  fs::path text_path = path;
  if (path.extension() == ".txt") {
    json_path.replace_extension(".json");
  } else {
    text_path.replace_extension(".txt");
  }
  if (json_path.has_parent_path()) ensure_dir(json_path.parent_path());
  write_text(json_path, report_to_json(report));
  write_text(text_path, format_report_text(report));
}

std::vector<std::string> read_id_list(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, path.string() + ": cannot open");
  const bool manifest = path.extension() == ".jsonl";
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string trimmed = line.substr(first, last - first + 1);
    ids.push_back(manifest ? parse_manifest_line(trimmed).sample_id : trimmed);
  }
  return ids;
}

SplitOutput split_id_file(const fs::path& input, double fraction, std::uint64_t seed, const fs::path& out_dir) {
  const auto ids = read_id_list(input);
  const DatasetSplit split = split_dataset(ids, fraction, seed);
  ensure_dir(out_dir);
  SplitOutput out{out_dir / "train.txt", out_dir / "eval.txt", split.train.size(), split.eval.size()};
  const auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& id : v) s += id + "\n";
    return s;
  };
  write_text(out.train_path, join(split.train));
  write_text(out.eval_path, join(split.eval));
  return out;
}

TrimapSource parse_trimap_source(std::string_view text) {
  if (text == "alpha") return TrimapSource::Alpha;
  if (text == "mask") return TrimapSource::Mask;
  throw Error(ErrorKind::InvalidArgument, "trimap mode must be 'alpha' or 'mask', got '" + std::string(text) + "'");
}

TrimapSummary make_trimaps(const fs::path& input_dir, const fs::path& out_dir, const TrimapJob& job) {
  job.thresholds.validate();
  if (job.erode_radius < 0) throw Error(ErrorKind::InvalidArgument, "erode radius must be >= 0");
  const auto files = list_pngs(input_dir);
  ensure_dir(out_dir);

  struct Outcome {
    bool written = false;
    std::string failure;
    std::vector<std::string> warnings;
  };
  std::vector<Outcome> outcomes(files.size());
  parallel_for(files.size(), job.workers, [&](std::size_t i) {
    Outcome& o = outcomes[i];
    try {
      const RasterImage image = load_png(files[i]);
      Trimap trimap;
      if (job.source == TrimapSource::Alpha) {
        trimap = trimap_from_alpha(alpha_from_image(image), job.thresholds);
      } else {
        std::vector<std::string> notes;
        trimap = trimap_from_mask(mask_from_image(image), job.erode_radius, job.thresholds.band_radius, &notes);
        for (auto& n : notes) o.warnings.push_back(files[i].filename().string() + ": " + n);
      }
      save_png(trimap, out_dir / files[i].filename());
      o.written = true;
    } catch (const Error& e) {
      o.failure = e.what();
    }
  });

  TrimapSummary summary;
  for (auto& o : outcomes) {
    if (o.written) {
      ++summary.written;
    } else {
      summary.failures.push_back(o.failure);
    }
    summary.warnings.insert(summary.warnings.end(), o.warnings.begin(), o.warnings.end());
  }
  return summary;
}

void composite_files(const fs::path& foreground, const fs::path& alpha, const fs::path& background,
                     const fs::path& out) {
  const RasterImage fg = to_rgb(load_png(foreground));
  const AlphaMatte matte = alpha_from_image(load_png(alpha));
  const RasterImage bg = to_rgb(load_png(background));
  save_png(matte_composite(fg, matte, bg), out);
}

}  // namespace smokesynth
