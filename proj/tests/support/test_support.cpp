#include "test_support.hpp"

#include <png.h>
#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "smokesynth/png_io.hpp"

namespace testsupport {

double unit(Gen& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

int between(Gen& g, int lo, int hi) {
  return lo + static_cast<int>(g() % static_cast<std::uint64_t>(hi - lo + 1));
}

RasterImage random_image(Gen& g, int w, int h, int channels) {
  std::vector<float> d(static_cast<std::size_t>(w) * h * channels);
  for (float& v : d) v = static_cast<float>(unit(g));
  return RasterImage(w, h, channels, std::move(d));
}

AlphaMatte random_alpha(Gen& g, int w, int h) {
  std::vector<float> d(static_cast<std::size_t>(w) * h);
  for (float& v : d) v = static_cast<float>(unit(g));
  return AlphaMatte(w, h, std::move(d));
}

AlphaMatte blobby_alpha(Gen& g, int w, int h) {
  AlphaMatte a(w, h, 0.0f);
  const int blobs = between(g, 1, 4);
  for (int b = 0; b < blobs; ++b) {
    const double cx = unit(g) * w;
    const double cy = unit(g) * h;
    const double r = 1.0 + unit(g) * (std::min(w, h) / 2.0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double d = std::hypot(x + 0.5 - cx, y + 0.5 - cy) / r;
        const double v = std::clamp(1.5 - d, 0.0, 1.0);
        a.at(x, y) = std::max(a.at(x, y), static_cast<float>(v));
      }
    }
  }
  return a;
}

BinaryMask random_mask(Gen& g, int w, int h, double density) {
  BinaryMask m(w, h);
  for (auto& v : m.data()) v = unit(g) < density ? 1 : 0;
  return m;
}

PolygonRegion random_polygon(Gen& g, int vertices, double extent) {
  PolygonRegion p;
  for (int i = 0; i < vertices; ++i) p.vertices.push_back({unit(g) * extent, unit(g) * extent});
  return p;
}

std::vector<double> random_distribution(Gen& g, int classes) {
  std::vector<double> p(classes);
  double sum = 0.0;
  for (double& v : p) {
    v = unit(g) + 1e-3;
    sum += v;
  }
  for (double& v : p) v /= sum;
  return p;
}

namespace {

BinaryMask brute_morph(const BinaryMask& m, int r, bool take_max) {
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) {
      bool any = false;
      bool all = true;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = x + dx;
          const int yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= m.width() || yy >= m.height()) continue;
          if (m.at(xx, yy)) any = true;
          else all = false;
        }
      }
      out.at(x, y) = take_max ? any : all;
    }
  }
  return out;
}

}  // namespace

BinaryMask brute_dilate(const BinaryMask& m, int r) { return brute_morph(m, r, true); }
BinaryMask brute_erode(const BinaryMask& m, int r) { return brute_morph(m, r, false); }

Trimap brute_trimap(const AlphaMatte& alpha, float fg, float bg, int r) {
  const int w = alpha.width();
  const int h = alpha.height();
  Trimap t(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      bool near_unknown = false;
      for (int dy = -r; dy <= r && !near_unknown; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int xx = x + dx;
          const int yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= w || yy >= h) continue;
          const float a = alpha.at(xx, yy);
          if (!(a >= fg) && !(a <= bg)) {
            near_unknown = true;
            break;
          }
        }
      }
      const float a = alpha.at(x, y);
      if (near_unknown) t.at(x, y) = TrimapLabel::Unknown;
      else t.at(x, y) = a >= fg ? TrimapLabel::Foreground : TrimapLabel::Background;
    }
  }
  return t;
}

Trimap brute_trimap_from_mask(const BinaryMask& mask, int erode_r, int band_r) {
  const BinaryMask fg = brute_erode(mask, erode_r);
  const BinaryMask grown = brute_dilate(mask, band_r);
  Trimap t(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (fg.at(x, y)) t.at(x, y) = TrimapLabel::Foreground;
      else if (!grown.at(x, y)) t.at(x, y) = TrimapLabel::Background;
      else t.at(x, y) = TrimapLabel::Unknown;
    }
  }
  return t;
}

Counts brute_counts(const BinaryMask& pred, const BinaryMask& gt) {
  Counts c;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      const bool p = pred.at(x, y) != 0;
      const bool t = gt.at(x, y) != 0;
      if (p && t) ++c.tp;
      else if (p) ++c.fp;
      else if (t) ++c.fn;
      else ++c.tn;
    }
  }
  return c;
}

bool crossing_parity(const std::vector<Point2>& poly, double px, double py) {
  int crossings = 0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = poly[i];
    const Point2 b = poly[(i + 1) % n];
    const bool straddles = (a.y <= py && b.y > py) || (b.y <= py && a.y > py);
    if (!straddles) continue;
    const double t = (py - a.y) / (b.y - a.y);
    if (a.x + t * (b.x - a.x) > px) ++crossings;
  }
  return crossings % 2 == 1;
}

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  std::random_device rd;
  for (;;) {
    path_ = fs::temp_directory_path() /
            ("smokesynth-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    if (fs::create_directories(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

[[noreturn]] void png_fail(png_structp, png_const_charp msg) { throw std::runtime_error(msg); }
void png_quiet(png_structp, png_const_charp) {}

}  // namespace

void write_raw_png(const fs::path& path, int w, int h, int color_type, int depth,
                   const std::vector<std::uint16_t>& samples) {
  const int channels = color_type == 0 ? 1 : color_type == 2 ? 3 : color_type == 4 ? 2 : 4;
  if (samples.size() != static_cast<std::size_t>(w) * h * channels) {
    throw std::runtime_error("write_raw_png: sample count mismatch");
  }
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
  if (!file) throw std::runtime_error("write_raw_png: cannot open " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_quiet);
  png_infop info = png_create_info_struct(png);
  const int bytes = depth / 8;
  std::vector<png_byte> row(static_cast<std::size_t>(w) * channels * bytes);
  try {
    png_init_io(png, file.get());
    png_set_IHDR(png, info, w, h, depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < h; ++y) {
      for (int i = 0; i < w * channels; ++i) {
        const std::uint16_t v = samples[static_cast<std::size_t>(y) * w * channels + i];
        if (bytes == 1) {
          row[i] = static_cast<png_byte>(v);
        } else {
          row[2 * i] = static_cast<png_byte>(v >> 8);
          row[2 * i + 1] = static_cast<png_byte>(v & 0xff);
        }
      }
      png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
}

std::vector<std::uint8_t> read_png_bytes(const fs::path& path, int* w, int* h, int* channels) {
  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
  if (!file) throw std::runtime_error("read_png_bytes: cannot open " + path.string());
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_quiet);
  png_infop info = png_create_info_struct(png);
  std::vector<std::uint8_t> out;
  try {
    png_init_io(png, file.get());
    png_read_info(png, info);
    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int ch = png_get_channels(png, info);
    if (png_get_bit_depth(png, info) != 8) throw std::runtime_error("read_png_bytes: not 8-bit");
    out.resize(static_cast<std::size_t>(width) * height * ch);
    for (int y = 0; y < height; ++y) png_read_row(png, out.data() + static_cast<std::size_t>(y) * width * ch, nullptr);
    if (w) *w = width;
    if (h) *h = height;
    if (channels) *channels = ch;
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::uint64_t file_hash(const fs::path& path) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : read_text(path)) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::map<std::string, std::uint64_t> tree_hashes(const fs::path& root) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = file_hash(e.path());
  }
  return out;
}

void write_fixture_assets(const fs::path& smoke_dir, const fs::path& background_dir, int smoke_count,
                          int background_count, std::uint64_t seed) {
  fs::create_directories(smoke_dir);
  fs::create_directories(background_dir);
  Gen g(seed);
  for (int i = 0; i < smoke_count; ++i) {
    // Dark plume on white, gray or rgb alternately.
    const int w = between(g, 24, 40);
    const int h = between(g, 24, 40);
    const int ch = i % 2 == 0 ? 1 : 3;
    const double cx = w * (0.3 + 0.4 * unit(g));
    const double cy = h * (0.3 + 0.4 * unit(g));
    const double r = std::min(w, h) * (0.2 + 0.2 * unit(g));
    std::vector<float> d(static_cast<std::size_t>(w) * h * ch);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double dist = std::hypot(x - cx, y - cy) / r;
        const double density = std::clamp(1.2 - dist, 0.0, 1.0);
        for (int c = 0; c < ch; ++c) {
          const double shade = 1.0 - density * (0.7 + 0.1 * c);
          d[(static_cast<std::size_t>(y) * w + x) * ch + c] = static_cast<float>(shade);
        }
      }
    }
    char name[32];
    std::snprintf(name, sizeof name, "smoke_%02d.png", i);
    save_png(RasterImage(w, h, ch, std::move(d)), smoke_dir / name);
  }
  for (int i = 0; i < background_count; ++i) {
    const int w = between(g, 64, 96);
    const int h = between(g, 48, 72);
    std::vector<float> d(static_cast<std::size_t>(w) * h * 3);
    const double phase = unit(g) * 6.0;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < 3; ++c) {
          const double v = 0.5 + 0.4 * std::sin(phase + 0.11 * x + 0.07 * y + c);
          d[(static_cast<std::size_t>(y) * w + x) * 3 + c] = static_cast<float>(v);
        }
      }
    }
    char name[32];
    std::snprintf(name, sizeof name, "bg_%02d.png", i);
    save_png(RasterImage(w, h, 3, std::move(d)), background_dir / name);
  }
}

int run_command(const std::string& command, std::string* output) {
  std::FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) return -1;
  std::string text;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) text.append(buf.data(), n);
  const int status = pclose(pipe);
  if (output) *output = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const fs::path& p) {
  std::string out = "'";
  for (char c : p.string()) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

}  // namespace testsupport
