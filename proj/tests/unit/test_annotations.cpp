#include <cmath>

#include "doctest.h"
#include "smokesynth/annotations.hpp"
#include "smokesynth/png_io.hpp"
#include "test_support.hpp"

using namespace smokesynth;
using namespace testsupport;

namespace {

std::size_t set_count(const BinaryMask& m) {
  std::size_t n = 0;
  for (auto v : m.data()) n += v;
  return n;
}

const char* kProject = R"({
  "_via_settings": {"ui": {}},
  "_via_img_metadata": {
    "a.png1234": {"filename": "a.png", "size": 1234, "file_attributes": {},
      "regions": [{"shape_attributes": {"name": "rect", "x": 0, "y": 0, "width": 2, "height": 2},
                   "region_attributes": {}}]},
    "b.png99": {"filename": "b.png", "size": 99, "file_attributes": {},
      "regions": [
        {"shape_attributes": {"name": "rect", "x": 2, "y": 3, "width": 4, "height": 2}},
        {"shape_attributes": {"name": "polygon", "all_points_x": [6, 10, 6], "all_points_y": [6, 6, 10]}},
        {"shape_attributes": {"name": "circle", "cx": 5, "cy": 5, "r": 2}}]},
    "c.png5": {"filename": "c.png", "size": 5, "file_attributes": {"width": 5, "height": 5}, "regions": []}
  }
})";

}  // namespace

TEST_CASE("VIA project parsing") {
  const ViaProject p = parse_via(kProject);
  REQUIRE(p.entries.size() == 3);
  CHECK(p.entries[0].filename == "a.png");
  CHECK(p.entries[0].key == "a.png1234");
  CHECK(std::get<RectRegion>(p.entries[0].regions[0]) == RectRegion{0, 0, 2, 2});
  CHECK(p.entries[1].regions.size() == 2);
  CHECK(p.entries[1].skipped_shapes.at("circle") == 1);
  CHECK(p.skipped_shapes.at("circle") == 1);
  CHECK(p.entries[2].regions.empty());
  REQUIRE(p.entries[2].dims.has_value());
  CHECK(*p.entries[2].dims == Dims{5, 5});
  CHECK(p.region_count() == 3);
  CHECK(p.find("b.png") == &p.entries[1]);
  CHECK(p.find("zzz.png") == nullptr);
}

TEST_CASE("VIA bare map, object regions and degenerate polygons") {
  const ViaProject p = parse_via(R"({"x.jpg": {"filename": "x.jpg", "regions": {
      "0": {"shape_attributes": {"name": "polygon", "all_points_x": [1, 2], "all_points_y": [1, 2]}},
      "1": {"shape_attributes": {"name": "rect", "x": 1, "y": 1, "width": 1, "height": 1}}}}})");
  REQUIRE(p.entries.size() == 1);
  CHECK(p.entries[0].regions.size() == 1);
  CHECK(p.skipped_shapes.at("degenerate_polygon") == 1);
}

TEST_CASE("VIA errors name the entry") {
  auto expect_parse_error = [](const char* text, const char* needle) {
    try {
      parse_via(text);
      FAIL("expected parse error for " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK_MESSAGE(std::string(e.what()).find(needle) != std::string::npos, e.what());
    }
  };
  expect_parse_error("{not json", "malformed");
  expect_parse_error(R"({"k1": {"regions": []}})", "k1");
  expect_parse_error(R"({"k2": {"filename": "f"}})", "regions");
  expect_parse_error(R"({"k3": {"filename": "f", "regions": [{"shape_attributes": {"name": "rect", "x": 0}}]}})",
                     "'y'");
  expect_parse_error(
      R"({"k4": {"filename": "f", "regions": [{"shape_attributes": {"name": "polygon", "all_points_x": [1,2,3], "all_points_y": [1,2]}}]}})",
      "mismatch");
  expect_parse_error(R"({"k5": {"filename": "f", "regions": []}, "k6": {"filename": "f", "regions": []}})",
                     "duplicate");
  expect_parse_error("[1,2]", "root");
}

TEST_CASE("VIA round trip keeps the supported subset") {
  ViaProject p = parse_via(kProject);
  for (auto& e : p.entries) e.skipped_shapes.clear();
  p.skipped_shapes.clear();
  CHECK(parse_via(to_via_json(p)) == p);
}

TEST_CASE("rasterize examples") {
  const std::vector<ViaRegion> rect{RectRegion{0, 0, 2, 2}};
  const BinaryMask m = rasterize(rect, {4, 4});
  CHECK(set_count(m) == 4);
  CHECK(m.at(1, 1) == 1);
  CHECK(m.at(2, 0) == 0);

  const std::vector<ViaRegion> all{PolygonRegion{{{-1, -1}, {10, -1}, {10, 10}, {-1, 10}}}};
  CHECK(set_count(rasterize(all, {6, 5})) == 30);
  CHECK(set_count(rasterize({}, {6, 5})) == 0);

  // x + y < 4 at pixel centres: 1 + 2 + 3 pixels.
  const std::vector<ViaRegion> tri{PolygonRegion{{{0, 0}, {4, 0}, {0, 4}}}};
  CHECK(set_count(rasterize(tri, {4, 4})) == 6);

  // Half-open rect edges and clipping outside the frame.
  CHECK(set_count(rasterize(std::vector<ViaRegion>{RectRegion{0.5, 0.5, 1.0, 1.0}}, {4, 4})) == 1);
  CHECK(set_count(rasterize(std::vector<ViaRegion>{RectRegion{-5, -5, 7, 7}}, {4, 4})) == 4);
  CHECK(set_count(rasterize(std::vector<ViaRegion>{RectRegion{3, 3, 0, 5}}, {4, 4})) == 0);
}

TEST_CASE("rasterize agrees with point_in_polygon on random polygons") {
  Gen g(31);
  for (int trial = 0; trial < 300; ++trial) {
    const int w = between(g, 1, 48), h = between(g, 1, 48);
    // Integer and half-integer vertices hit pixel centres and edges often.
    PolygonRegion poly;
    const int n = between(g, 3, 10);
    for (int i = 0; i < n; ++i) {
      const double snap = trial % 3 == 0 ? 1.0 : trial % 3 == 1 ? 0.5 : 0.0;
      double x = unit(g) * (w + 8) - 4, y = unit(g) * (h + 8) - 4;
      if (snap > 0) {
        x = std::round(x / snap) * snap;
        y = std::round(y / snap) * snap;
      }
      poly.vertices.push_back({x, y});
    }
    const std::vector<ViaRegion> regions{poly};
    const BinaryMask m = rasterize(regions, {w, h});
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) CHECK(m.at(x, y) == point_in_polygon(poly, x + 0.5, y + 0.5));
  }
}

TEST_CASE("point_in_polygon agrees with an independent crossing count") {
  Gen g(32);
  for (int trial = 0; trial < 200; ++trial) {
    // Irrational-ish vertices keep centres off the edges, where the two
    // formulations may legitimately round differently.
    const PolygonRegion p = random_polygon(g, between(g, 3, 10), 32.0 + unit(g));
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x)
        CHECK(point_in_polygon(p, x + 0.5, y + 0.5) == crossing_parity(p.vertices, x + 0.5, y + 0.5));
  }
}

TEST_CASE("rasterized union is monotone in the region list") {
  Gen g(33);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ViaRegion> regions;
    BinaryMask prev(24, 24);
    for (int k = 0; k < 4; ++k) {
      if (k % 2) regions.emplace_back(RectRegion{unit(g) * 24, unit(g) * 24, unit(g) * 12, unit(g) * 12});
      else regions.emplace_back(random_polygon(g, between(g, 3, 8), 24));
      const BinaryMask next = rasterize(regions, {24, 24});
      for (std::size_t i = 0; i < next.size(); ++i) CHECK(next.data()[i] >= prev.data()[i]);
      prev = next;
    }
  }
}

TEST_CASE("project_to_masks writes one mask per entry") {
  const ViaProject p = parse_via(kProject);
  TempDir dir("via");
  const DimsLookup lookup = [](const std::string& name) -> std::optional<Dims> {
    if (name == "a.png") return Dims{8, 8};
    if (name == "b.png") return Dims{10, 10};
    return std::nullopt;
  };
  const MaskExportSummary s = project_to_masks(p, lookup, dir.path(), 2);
  CHECK(s.written == 3);
  CHECK(s.empty == 1);
  CHECK(s.failures.empty());
  CHECK(s.set_pixels.at("a.png") == 4);
  CHECK(s.set_pixels.at("b.png") == 14);
  CHECK(s.set_pixels.at("c.png") == 0);
  CHECK(s.skipped_shapes.at("circle") == 1);
  const auto bytes = read_png_bytes(dir / "b.png");
  std::size_t on = 0;
  for (auto v : bytes) {
    CHECK((v == 0 || v == 255));
    on += v == 255;
  }
  CHECK(on == 14);
  CHECK(png_dimensions(dir / "c.png") == Dims{5, 5});

  const MaskExportSummary missing = project_to_masks(
      p, [](const std::string&) -> std::optional<Dims> { return std::nullopt; }, dir.path());
  CHECK(missing.written == 1);
  CHECK(missing.failures.size() == 2);
}
