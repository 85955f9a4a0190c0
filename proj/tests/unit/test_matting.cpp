#include <algorithm>

#include "doctest.h"
#include "smokesynth/compositor.hpp"
#include "smokesynth/matting.hpp"
#include "test_support.hpp"

using namespace smokesynth;
using namespace testsupport;

namespace {

std::size_t count_label(const Trimap& t, TrimapLabel label) {
  return static_cast<std::size_t>(std::count(t.data().begin(), t.data().end(), label));
}

AlphaMatte block_alpha(int size, int lo, int hi, float fringe) {
  AlphaMatte a(size, size, 0.0f);
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      if (x >= lo && x < hi && y >= lo && y < hi) a.at(x, y) = 1.0f;
      else if (x >= lo - 1 && x <= hi && y >= lo - 1 && y <= hi) a.at(x, y) = fringe;
    }
  }
  return a;
}

}  // namespace

TEST_CASE("constant alphas give single-label trimaps") {
  CHECK(count_label(trimap_from_alpha(AlphaMatte(6, 5, 1.0f)), TrimapLabel::Foreground) == 30);
  CHECK(count_label(trimap_from_alpha(AlphaMatte(6, 5, 0.0f)), TrimapLabel::Background) == 30);
  TrimapThresholds bad;
  bad.foreground = 0.1f;
  bad.background = 0.2f;
  CHECK_THROWS_AS(trimap_from_alpha(AlphaMatte(2, 2), bad), Error);
}

TEST_CASE("binary block: thresholds alone, no band to grow") {
  // Hard 0/1 edges leave nothing strictly between the thresholds.
  const AlphaMatte a = block_alpha(8, 2, 6, 0.0f);
  TrimapThresholds th;
  th.band_radius = 1;
  const Trimap t = trimap_from_alpha(a, th);
  CHECK(t == brute_trimap(a, th.foreground, th.background, 1));
  CHECK(count_label(t, TrimapLabel::Unknown) == 0);
  CHECK(count_label(t, TrimapLabel::Foreground) == 16);
}

TEST_CASE("fringed block: unknown ring where the dilation puts it") {
  const AlphaMatte a = block_alpha(8, 2, 6, 0.5f);
  TrimapThresholds th;
  th.band_radius = 1;
  const Trimap t = trimap_from_alpha(a, th);
  CHECK(t == brute_trimap(a, th.foreground, th.background, 1));
  // Fringe ring (x,y in 1..6) grown by one pixel covers the whole frame and
  // leaves only the 2x2 core as foreground.
  CHECK(count_label(t, TrimapLabel::Foreground) == 4);
  CHECK(t.at(3, 3) == TrimapLabel::Foreground);
  CHECK(t.at(2, 2) == TrimapLabel::Unknown);
  CHECK(count_label(t, TrimapLabel::Background) == 0);
}

TEST_CASE("trimap_from_alpha matches the oracle on random alphas") {
  Gen g(21);
  for (int trial = 0; trial < 100; ++trial) {
    const AlphaMatte a = blobby_alpha(g, between(g, 1, 30), between(g, 1, 30));
    TrimapThresholds th;
    th.background = static_cast<float>(0.01 + 0.3 * unit(g));
    th.foreground = static_cast<float>(0.6 + 0.39 * unit(g));
    th.band_radius = between(g, 0, 5);
    CHECK(trimap_from_alpha(a, th) == brute_trimap(a, th.foreground, th.background, th.band_radius));
  }
}

TEST_CASE("band radius growth never shrinks the unknown set") {
  Gen g(22);
  for (int trial = 0; trial < 50; ++trial) {
    const AlphaMatte a = blobby_alpha(g, 24, 24);
    TrimapThresholds th;
    th.band_radius = 0;
    Trimap prev = trimap_from_alpha(a, th);
    for (int r = 1; r <= 6; ++r) {
      th.band_radius = r;
      const Trimap next = trimap_from_alpha(a, th);
      for (std::size_t i = 0; i < next.size(); ++i) {
        if (prev.data()[i] == TrimapLabel::Unknown) CHECK(next.data()[i] == TrimapLabel::Unknown);
      }
      prev = next;
    }
  }
}

TEST_CASE("binary alpha with tight thresholds reproduces itself") {
  Gen g(23);
  const BinaryMask m = random_mask(g, 20, 20, 0.4);
  AlphaMatte a(20, 20);
  for (std::size_t i = 0; i < m.size(); ++i) a.data()[i] = m.data()[i] ? 1.0f : 0.0f;
  TrimapThresholds th;
  th.background = 0.5f;
  th.foreground = 0.5f + 1e-6f;
  th.band_radius = 0;
  const Trimap t = trimap_from_alpha(a, th);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(t.data()[i] == (m.data()[i] ? TrimapLabel::Foreground : TrimapLabel::Background));
  }
}

TEST_CASE("trimap_from_mask: 12x12 block fixture and trivial cases") {
  BinaryMask m(12, 12);
  for (int y = 4; y < 8; ++y)
    for (int x = 4; x < 8; ++x) m.at(x, y) = 1;
  const Trimap t = trimap_from_mask(m, 1, 1);
  CHECK(t == brute_trimap_from_mask(m, 1, 1));
  CHECK(count_label(t, TrimapLabel::Foreground) == 4);
  CHECK(count_label(t, TrimapLabel::Unknown) == 32);
  CHECK(count_label(t, TrimapLabel::Background) == 108);

  CHECK(count_label(trimap_from_mask(BinaryMask(5, 5, 1), 0, 0), TrimapLabel::Foreground) == 25);
  CHECK(count_label(trimap_from_mask(BinaryMask(5, 5, 0)), TrimapLabel::Background) == 25);

  std::vector<std::string> warnings;
  trimap_from_mask(m, 3, 1, &warnings);
  CHECK(warnings.size() == 1);
  CHECK_THROWS_AS(trimap_from_mask(m, -1, 1), Error);
}

TEST_CASE("trimap_from_mask matches the oracle on random masks") {
  Gen g(24);
  for (int trial = 0; trial < 100; ++trial) {
    const BinaryMask m = random_mask(g, between(g, 1, 25), between(g, 1, 25), unit(g));
    const int er = between(g, 0, 4);
    const int br = between(g, 0, 4);
    const Trimap t = trimap_from_mask(m, er, br);
    CHECK(t == brute_trimap_from_mask(m, er, br));
    CHECK(count_label(t, TrimapLabel::Foreground) + count_label(t, TrimapLabel::Background) +
              count_label(t, TrimapLabel::Unknown) ==
          m.size());
    CHECK(validate_trimap(t, m).passed());
  }
}

TEST_CASE("validate_trimap counts violations like a per-pixel scan") {
  Trimap fg(3, 3, TrimapLabel::Foreground);
  CHECK(validate_trimap(fg, BinaryMask(3, 3, 1)).passed());
  BinaryMask one_off(3, 3, 1);
  one_off.at(1, 2) = 0;
  const TrimapValidation v = validate_trimap(fg, one_off);
  CHECK(v.violations() == 1);
  REQUIRE(v.first_violations.size() == 1);
  CHECK(v.first_violations[0] == PixelCoord{1, 2});

  Gen g(25);
  for (int trial = 0; trial < 100; ++trial) {
    Trimap t(16, 16);
    for (auto& l : t.data()) l = static_cast<TrimapLabel>(g() % 3);
    const BinaryMask m = random_mask(g, 16, 16, 0.5);
    std::size_t fg_bad = 0, bg_bad = 0, f = 0, b = 0, u = 0;
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        const TrimapLabel l = t.at(x, y);
        if (l == TrimapLabel::Foreground) {
          ++f;
          if (!m.at(x, y)) ++fg_bad;
        } else if (l == TrimapLabel::Background) {
          ++b;
          if (m.at(x, y)) ++bg_bad;
        } else {
          ++u;
        }
      }
    }
    const TrimapValidation r = validate_trimap(t, m);
    CHECK(r.foreground_violations == fg_bad);
    CHECK(r.background_violations == bg_bad);
    CHECK(r.foreground_count == f);
    CHECK(r.background_count == b);
    CHECK(r.unknown_count == u);
    CHECK(r.first_violations.size() == std::min<std::size_t>(16, fg_bad + bg_bad));
  }
  CHECK_THROWS_AS(validate_trimap(Trimap(2, 2), BinaryMask(2, 3)), Error);
}

TEST_CASE("matte_composite arithmetic and agreement with composite") {
  const RasterImage f(1, 1, 3, 0.8f);
  const RasterImage b(1, 1, 3, 0.0f);
  const RasterImage out = matte_composite(f, AlphaMatte(1, 1, 0.25f), b);
  CHECK(out.at(0, 0, 0) == doctest::Approx(0.2).epsilon(1e-7));

  Gen g(26);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = between(g, 1, 20), h = between(g, 1, 20);
    const RasterImage fg = random_image(g, w, h, 3);
    const RasterImage bg = random_image(g, w, h, 3);
    const AlphaMatte a = random_alpha(g, w, h);
    CHECK(matte_composite(fg, a, bg) == composite(fg, a, bg, {0, 0}));
    CHECK(matte_composite(fg, AlphaMatte(w, h, 0.0f), bg) == bg);
    CHECK(matte_composite(fg, AlphaMatte(w, h, 1.0f), bg) == fg);
  }
  CHECK_THROWS_AS(matte_composite(f, AlphaMatte(2, 1), b), Error);
}
