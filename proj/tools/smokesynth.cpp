// smokesynth: synthetic smoke dataset generation, annotation import,
// trimap creation and segmentation evaluation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <iostream>
#include <memory>
#include <string>

#include "json_config.hpp"
#include "smokesynth/pipeline.hpp"
#include "smokesynth/simd/kernels.hpp"

namespace {

using namespace smokesynth;

void print_error_line(std::string_view kind, const std::string& message) {
  nlohmann::json line = {{"error", kind}, {"message", message}};
  std::cerr << line.dump() << '\n';
}

void print_lines(const std::vector<std::string>& lines, std::string_view prefix) {
  for (const auto& l : lines) std::cerr << prefix << l << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic smoke segmentation data toolkit"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<cli::JsonConfig>());
  app.set_config("--config", "", "JSON file mirroring the command-line flags; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string simd_level = "auto";
  app.add_option("--simd", simd_level, "Kernel set: auto, scalar or avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  // generate
  GenerationConfig gen;
  std::string polarity = "white";
  auto* generate = app.add_subcommand("generate", "Composite smoke plumes onto backgrounds");
  generate->add_option("--smoke-dir", gen.smoke_dir, "Directory of smoke source PNGs")->required();
  generate->add_option("--background-dir", gen.background_dir, "Directory of background PNGs")->required();
  generate->add_option("--out", gen.out_dir, "Output directory")->required();
  generate->add_option("--count", gen.count, "Number of samples")->capture_default_str();
  generate->add_option("--seed", gen.master_seed, "Master seed")->capture_default_str();
  generate->add_option("--polarity", polarity, "Smoke source background: dark or white")
      ->check(CLI::IsMember({"dark", "white"}))
      ->capture_default_str();
  generate->add_option("--mask-threshold", gen.mask_threshold, "Alpha threshold for masks")->capture_default_str();
  generate->add_option("--workers", gen.workers, "Worker threads")->capture_default_str();
  generate->add_option("--scale-min", gen.ranges.width_fraction_min, "Minimum plume width / background width")
      ->capture_default_str();
  generate->add_option("--scale-max", gen.ranges.width_fraction_max, "Maximum plume width / background width")
      ->capture_default_str();
  generate->add_option("--rotation-max", gen.ranges.rotation_max_deg, "Maximum |rotation| in degrees")
      ->capture_default_str();
  generate->add_option("--tint-min", gen.ranges.tint_min, "Minimum per-channel tint")->capture_default_str();
  generate->add_option("--tint-max", gen.ranges.tint_max, "Maximum per-channel tint")->capture_default_str();
  generate->add_option("--opacity-min", gen.ranges.opacity_min, "Minimum plume opacity")->capture_default_str();
  generate->add_option("--opacity-max", gen.ranges.opacity_max, "Maximum plume opacity")->capture_default_str();

  // import-annotations
  std::string via_path, images_dir, masks_out;
  int import_workers = 1;
  auto* import = app.add_subcommand("import-annotations", "Rasterize VIA annotations into masks");
  import->add_option("--via", via_path, "VIA project JSON")->required();
  import->add_option("--images-dir", images_dir, "Directory holding the annotated images")->required();
  import->add_option("--out", masks_out, "Output mask directory")->required();
  import->add_option("--workers", import_workers, "Worker threads")->capture_default_str();

  // evaluate
  std::string pred_dir, gt_dir, report_path;
  EvaluateOptions eval_opts;
  auto* evaluate = app.add_subcommand("evaluate", "Mean IoU of predicted masks against ground truth");
  evaluate->add_option("--pred-dir", pred_dir, "Predicted mask PNGs")->required();
  evaluate->add_option("--gt-dir", gt_dir, "Ground-truth mask PNGs")->required();
  evaluate->add_option("--report", report_path, "Report path (JSON; a .txt table is written beside it)")
      ->required();
  evaluate->add_option("--pred-threshold", eval_opts.pred_threshold, "Byte threshold for soft predictions")
      ->check(CLI::Range(0, 255))
      ->capture_default_str();
  evaluate->add_option("--name", eval_opts.run_name, "Run name shown in the report (default: prediction dir)");

  // split
  std::string split_input, split_out;
  double fraction = 0.8;
  std::uint64_t split_seed = 0;
  auto* split = app.add_subcommand("split", "Seeded train/eval split of a manifest or id list");
  split->add_option("--input", split_input, "manifest.jsonl or text file with one id per line")->required();
  split->add_option("--fraction", fraction, "Train fraction")->capture_default_str();
  split->add_option("--seed", split_seed, "Shuffle seed")->capture_default_str();
  split->add_option("--out", split_out, "Directory for train.txt and eval.txt")->required();

  // trimaps
  std::string trimap_in, trimap_out, trimap_mode = "alpha";
  TrimapJob trimap_job;
  auto* trimaps = app.add_subcommand("trimaps", "Build {0,128,255} trimaps from alphas or masks");
  trimaps->add_option("--input-dir", trimap_in, "Alpha or mask PNGs")->required();
  trimaps->add_option("--mode", trimap_mode, "alpha or mask")
      ->check(CLI::IsMember({"alpha", "mask"}))
      ->capture_default_str();
  trimaps->add_option("--out", trimap_out, "Output directory")->required();
  trimaps->add_option("--fg-threshold", trimap_job.thresholds.foreground, "Alpha at or above is foreground")
      ->capture_default_str();
  trimaps->add_option("--bg-threshold", trimap_job.thresholds.background, "Alpha at or below is background")
      ->capture_default_str();
  trimaps->add_option("--band-radius", trimap_job.thresholds.band_radius, "Unknown band radius in pixels")
      ->capture_default_str();
  trimaps->add_option("--erode-radius", trimap_job.erode_radius, "Foreground erosion radius (mask mode)")
      ->capture_default_str();
  trimaps->add_option("--workers", trimap_job.workers, "Worker threads")->capture_default_str();

  // composite
  std::string fg_path, alpha_path, bg_path, composite_out;
  auto* composite = app.add_subcommand("composite", "Blend one foreground over a background with a matte");
  composite->add_option("--foreground", fg_path, "Foreground PNG")->required();
  composite->add_option("--alpha", alpha_path, "Alpha matte PNG")->required();
  composite->add_option("--background", bg_path, "Background PNG")->required();
  composite->add_option("--out", composite_out, "Output PNG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error_line("usage", e.what());
    return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
  }

  try {
    simd::select(simd::parse_level(simd_level));

    if (*generate) {
      gen.polarity = parse_polarity(polarity);
      const GenerationSummary summary = generate_dataset(gen);
      print_lines(summary.asset_failures, "warning: unreadable asset ");
      std::cout << "generated " << summary.records.size() << " samples (" << summary.reseeds
                << " reseeds) -> " << summary.manifest_path.string() << '\n';
    } else if (*import) {
      const MaskExportSummary summary = import_annotations(via_path, images_dir, masks_out, import_workers);
      print_lines(summary.failures, "warning: ");
      std::size_t skipped = 0;
      for (const auto& [name, n] : summary.skipped_shapes) {
        skipped += n;
        std::cerr << "skipped shape " << name << ": " << n << '\n';
      }
      std::cout << summary.written << " written, " << summary.empty << " empty, " << skipped
                << " skipped shapes, " << summary.failures.size() << " failed\n";
    } else if (*evaluate) {
      const EvalReport report = evaluate_directories(pred_dir, gt_dir, eval_opts);
      write_report(report, report_path);
      std::cout << format_report_text(report);
    } else if (*split) {
      const SplitOutput out = split_id_file(split_input, fraction, split_seed, split_out);
      std::cout << "train: " << out.train_count << " -> " << out.train_path.string() << '\n'
                << "eval: " << out.eval_count << " -> " << out.eval_path.string() << '\n';
    } else if (*trimaps) {
      trimap_job.source = parse_trimap_source(trimap_mode);
      const TrimapSummary summary = make_trimaps(trimap_in, trimap_out, trimap_job);
      print_lines(summary.warnings, "warning: ");
      print_lines(summary.failures, "failed: ");
      std::cout << summary.written << " written, " << summary.failures.size() << " failed\n";
      if (!summary.failures.empty()) return 1;
    } else if (*composite) {
      composite_files(fg_path, alpha_path, bg_path, composite_out);
      std::cout << "wrote " << composite_out << '\n';
    }
  } catch (const Error& e) {
    print_error_line(to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error_line("internal", e.what());
    return 1;
  }
  return 0;
}
