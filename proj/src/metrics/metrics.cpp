#include "smokesynth/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "smokesynth/simd/kernels.hpp"

namespace smokesynth {
namespace {

std::string two_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string iou_text(const std::optional<double>& v) {
  return v ? two_decimals(100.0 * *v) : std::string("undefined");
}

nlohmann::json iou_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json confusion_json(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

}  // namespace

const char* to_string(SegClass c) noexcept { return c == SegClass::Smoke ? "smoke" : "background"; }

ClassCounts ConfusionMatrix::counts(SegClass c) const noexcept {
  if (c == SegClass::Smoke) return {tp, fp, fn, tn};
  return {tn, fn, fp, tp};
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) noexcept {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

ConfusionMatrix confusion(const BinaryMask& pred, const BinaryMask& gt) {
  require_same_dims(pred.dims(), gt.dims(), "confusion: pred vs gt");
  std::uint64_t counts[4] = {0, 0, 0, 0};
  simd::active().count_confusion(pred.data().data(), gt.data().data(), pred.size(), counts);
  return {counts[0], counts[1], counts[2], counts[3]};
}

std::optional<double> iou(const ConfusionMatrix& cm, SegClass c) {
  const ClassCounts k = cm.counts(c);
  const std::uint64_t denom = k.tp + k.fp + k.fn;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(k.tp) / static_cast<double>(denom);
}

double round_percent(double fraction) noexcept { return std::round(fraction * 10000.0) / 100.0; }

EvalReport mean_iou(std::span<const MaskPair> pairs, std::string run_name) {
  if (pairs.empty()) throw Error(ErrorKind::InvalidArgument, "mean_iou: no prediction/ground-truth pairs");
  EvalReport report;
  report.run_name = std::move(run_name);
  report.images.reserve(pairs.size());
  for (const MaskPair& pair : pairs) {
    if (pair.pred == nullptr || pair.gt == nullptr) {
      throw Error(ErrorKind::InvalidArgument, "mean_iou: pair '" + pair.name + "' is missing a mask");
    }
    if (pair.pred->dims() != pair.gt->dims()) {
      require_same_dims(pair.pred->dims(), pair.gt->dims(), ("mean_iou: pair '" + pair.name + "'").c_str());
    }
    ImageScore score;
    score.name = pair.name;
    score.confusion = confusion(*pair.pred, *pair.gt);
    for (SegClass c : kSegClasses) score.class_iou[static_cast<int>(c)] = iou(score.confusion, c);
    report.total += score.confusion;
    report.images.push_back(std::move(score));
  }

  double sum = 0.0;
  int defined = 0;
  for (SegClass c : kSegClasses) {
    const auto v = iou(report.total, c);
    report.class_iou[static_cast<int>(c)] = v;
    if (v) {
      sum += *v;
      ++defined;
    }
  }
  report.mean_iou = defined > 0 ? sum / defined : 0.0;
  report.miou_percent = round_percent(report.mean_iou);
  report.gt_pixels = {report.total.tn + report.total.fp, report.total.tp + report.total.fn};
  return report;
}

std::string format_miou_table(std::span<const std::pair<std::string, double>> rows) {
  std::size_t name_width = 5;
  std::size_t value_width = 4;
  std::vector<std::string> values;
  for (const auto& [name, miou] : rows) {
    name_width = std::max(name_width, name.size());
    values.push_back(two_decimals(miou));
    value_width = std::max(value_width, values.back().size());
  }
  const auto line = [&](const std::string& name, const std::string& value) {
    return "| " + name + std::string(name_width - name.size(), ' ') + " | " +
           std::string(value_width - value.size(), ' ') + value + " |\n";
  };
  std::string out = line("Model", "mIoU");
  out += "|" + std::string(name_width + 2, '-') + "|" + std::string(value_width + 2, '-') + "|\n";
  for (std::size_t i = 0; i < rows.size(); ++i) out += line(rows[i].first, values[i]);
  return out;
}

std::string format_report_text(const EvalReport& report) {
  const std::pair<std::string, double> row{report.run_name, report.miou_percent};
  std::string out = format_miou_table(std::span(&row, 1));
  out += "\n";
  out += "images: " + std::to_string(report.image_count()) + " (IoU from confusion summed over all images)\n";
  for (SegClass c : kSegClasses) {
    const int k = static_cast<int>(c);
    out += std::string(to_string(c)) + " IoU: " + iou_text(report.class_iou[k]) +
           " (gt pixels " + std::to_string(report.gt_pixels[k]) + ")\n";
  }
  const auto& t = report.total;
  out += "smoke confusion: tp=" + std::to_string(t.tp) + " fp=" + std::to_string(t.fp) +
         " fn=" + std::to_string(t.fn) + " tn=" + std::to_string(t.tn) + "\n";
  for (const auto& u : report.unmatched) out += "unmatched: " + u + "\n";
  for (const auto& e : report.errors) out += "error: " + e + "\n";
  return out;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json images = nlohmann::json::array();
  for (const auto& s : report.images) {
    images.push_back({{"name", s.name},
                      {"iou_background", iou_json(s.class_iou[0])},
                      {"iou_smoke", iou_json(s.class_iou[1])},
                      {"confusion", confusion_json(s.confusion)}});
  }
  nlohmann::json doc = {
      {"run_name", report.run_name},
      {"convention", "dataset_aggregate"},
      {"miou_percent", report.miou_percent},
      {"mean_iou", report.mean_iou},
      {"class_iou", {{"background", iou_json(report.class_iou[0])}, {"smoke", iou_json(report.class_iou[1])}}},
      {"gt_pixels", {{"background", report.gt_pixels[0]}, {"smoke", report.gt_pixels[1]}}},
      {"image_count", report.image_count()},
      {"confusion", confusion_json(report.total)},
      {"images", images},
      {"unmatched", report.unmatched},
      {"errors", report.errors},
  };
  return doc.dump(2) + "\n";
}

}  // namespace smokesynth
