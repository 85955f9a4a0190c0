#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "smokesynth/annotations.hpp"

namespace smokesynth {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& entry, const std::string& what) {
  throw Error(ErrorKind::Parse, "VIA entry '" + entry + "': " + what);
}

double number_at(const Json& obj, const char* key, const std::string& entry) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(entry, std::string("missing shape attribute '") + key + "'");
  if (!it->is_number()) fail(entry, std::string("shape attribute '") + key + "' is not a number");
  return it->get<double>();
}

std::vector<double> numbers_at(const Json& obj, const char* key, const std::string& entry) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(entry, std::string("missing shape attribute '") + key + "'");
  if (!it->is_array()) fail(entry, std::string("shape attribute '") + key + "' is not an array");
  std::vector<double> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number()) fail(entry, std::string("non-numeric value in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

std::optional<int> dimension(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) return std::nullopt;
  if (it->is_number_integer()) return it->get<int>();
  if (it->is_string()) {
    try {
      std::size_t used = 0;
      const std::string s = it->get<std::string>();
      const int v = std::stoi(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

std::optional<Dims> embedded_dims(const Json& entry) {
  auto w = dimension(entry, "width");
  auto h = dimension(entry, "height");
  if ((!w || !h) && entry.contains("file_attributes") && entry["file_attributes"].is_object()) {
    w = dimension(entry["file_attributes"], "width");
    h = dimension(entry["file_attributes"], "height");
  }
  if (w && h && *w > 0 && *h > 0) return Dims{*w, *h};
  return std::nullopt;
}

void parse_region(const Json& region, ViaEntry& out) {
  const std::string& entry = out.key;
  if (!region.is_object()) fail(entry, "region is not an object");
  const auto sa = region.find("shape_attributes");
  if (sa == region.end() || !sa->is_object()) fail(entry, "region without 'shape_attributes'");
  const auto name_it = sa->find("name");
  if (name_it == sa->end() || !name_it->is_string()) fail(entry, "shape_attributes without 'name'");
  const std::string name = name_it->get<std::string>();

  if (name == "rect") {
    RectRegion r{number_at(*sa, "x", entry), number_at(*sa, "y", entry), number_at(*sa, "width", entry),
                 number_at(*sa, "height", entry)};
    if (r.width < 0.0 || r.height < 0.0) fail(entry, "rect with negative width or height");
    out.regions.emplace_back(r);
  } else if (name == "polygon") {
    const auto xs = numbers_at(*sa, "all_points_x", entry);
    const auto ys = numbers_at(*sa, "all_points_y", entry);
    if (xs.size() != ys.size()) fail(entry, "polygon all_points_x/all_points_y length mismatch");
    if (xs.size() < 3) {
      ++out.skipped_shapes["degenerate_polygon"];
      return;
    }
    PolygonRegion p;
    p.vertices.reserve(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) p.vertices.push_back({xs[i], ys[i]});
    out.regions.emplace_back(std::move(p));
  } else {
    ++out.skipped_shapes[name];
  }
}

ViaEntry parse_entry(const std::string& key, const Json& value) {
  ViaEntry entry;
  entry.key = key;
  if (!value.is_object()) fail(key, "entry is not an object");
  const auto fn = value.find("filename");
  if (fn == value.end() || !fn->is_string()) fail(key, "missing 'filename'");
  entry.filename = fn->get<std::string>();
  const auto regions = value.find("regions");
  if (regions == value.end()) fail(key, "missing 'regions'");
  if (regions->is_array()) {
    for (const auto& r : *regions) parse_region(r, entry);
  } else if (regions->is_object()) {
    // VIA 1.x stored regions as an index-keyed object.
    for (const auto& [_, r] : regions->items()) parse_region(r, entry);
  } else {
    fail(key, "'regions' is neither an array nor an object");
  }
  entry.dims = embedded_dims(value);
  return entry;
}

}  // namespace

const ViaEntry* ViaProject::find(std::string_view filename) const {
  const auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const ViaEntry& e) { return e.filename == filename; });
  return it == entries.end() ? nullptr : &*it;
}

std::size_t ViaProject::region_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.regions.size();
  return n;
}

ViaProject parse_via(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text.begin(), json_text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Parse, std::string("malformed VIA JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Parse, "VIA JSON root must be an object");

  const Json* metadata = &doc;
  if (const auto it = doc.find("_via_img_metadata"); it != doc.end()) {
    if (!it->is_object()) throw Error(ErrorKind::Parse, "'_via_img_metadata' must be an object");
    metadata = &*it;
  }

  ViaProject project;
  std::set<std::string> seen;
  for (const auto& [key, value] : metadata->items()) {
    if (key.rfind("_via_", 0) == 0) continue;
    ViaEntry entry = parse_entry(key, value);
    if (!seen.insert(entry.filename).second) fail(key, "duplicate filename '" + entry.filename + "'");
    for (const auto& [name, count] : entry.skipped_shapes) project.skipped_shapes[name] += count;
    project.entries.push_back(std::move(entry));
  }
  return project;
}

std::string to_via_json(const ViaProject& project) {
  Json metadata = Json::object();
  for (const auto& entry : project.entries) {
    Json regions = Json::array();
    for (const auto& region : entry.regions) {
      Json shape;
      if (const auto* r = std::get_if<RectRegion>(&region)) {
        shape = {{"name", "rect"}, {"x", r->x}, {"y", r->y}, {"width", r->width}, {"height", r->height}};
      } else {
        const auto& p = std::get<PolygonRegion>(region);
        Json xs = Json::array();
        Json ys = Json::array();
        for (const auto& v : p.vertices) {
          xs.push_back(v.x);
          ys.push_back(v.y);
        }
        shape = {{"name", "polygon"}, {"all_points_x", xs}, {"all_points_y", ys}};
      }
      regions.push_back({{"shape_attributes", shape}, {"region_attributes", Json::object()}});
    }
    Json file_attributes = Json::object();
    if (entry.dims) {
      file_attributes["width"] = entry.dims->width;
      file_attributes["height"] = entry.dims->height;
    }
    const std::string key = entry.key.empty() ? entry.filename : entry.key;
    metadata[key] = {{"filename", entry.filename}, {"regions", regions}, {"file_attributes", file_attributes}};
  }
  Json doc = {{"_via_img_metadata", metadata}};
  return doc.dump(2);
}

}  // namespace smokesynth
