#include "smokesynth/png_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

#include "smokesynth/color.hpp"

namespace smokesynth {
namespace {

namespace fs = std::filesystem;

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) {
    throw Error(ErrorKind::Io, path.string() + ": cannot open (" + (mode[0] == 'r' ? "read" : "write") + ")");
  }
  return f;
}

struct ErrorSink {
  char message[256] = {};
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<ErrorSink*>(png_get_error_ptr(png));
  std::snprintf(sink->message, sizeof sink->message, "%s", msg);
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

struct Decoded {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  int channels = 0;
  bool header_only = false;
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
};

// Returns false with sink.message filled on any libpng error. Only `out` and
// `sink` (caller-owned memory) are written after setjmp.
bool decode(std::FILE* file, Decoded& out, ErrorSink& sink) {
  png_byte signature[8] = {};
  if (std::fread(signature, 1, sizeof signature, file) != sizeof signature ||
      png_sig_cmp(signature, 0, sizeof signature) != 0) {
    std::snprintf(sink.message, sizeof sink.message, "not a PNG file (bad signature)");
    return false;
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  if (png == nullptr) {
    std::snprintf(sink.message, sizeof sink.message, "out of memory");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    std::snprintf(sink.message, sizeof sink.message, "out of memory");
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }

  png_init_io(png, file);
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  out.width = png_get_image_width(png, info);
  out.height = png_get_image_height(png, info);
  out.bit_depth = png_get_bit_depth(png, info);
  out.color_type = png_get_color_type(png, info);
  if (out.header_only) {
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
  }
  if (out.color_type == PNG_COLOR_TYPE_PALETTE) {
    std::snprintf(sink.message, sizeof sink.message, "palette PNGs are not supported");
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  if (out.bit_depth != 8 && out.bit_depth != 16) {
    std::snprintf(sink.message, sizeof sink.message, "unsupported bit depth %d", out.bit_depth);
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  out.channels = png_get_channels(png, info);
  const std::size_t rowbytes = png_get_rowbytes(png, info);
  out.pixels.resize(rowbytes * out.height);
  out.rows.resize(out.height);
  for (png_uint_32 y = 0; y < out.height; ++y) out.rows[y] = out.pixels.data() + y * rowbytes;
  png_read_image(png, out.rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

bool encode(std::FILE* file, const std::uint8_t* bytes, int width, int height, int channels,
            ErrorSink& sink) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink, on_png_error, on_png_warning);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, file);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(bytes + y * stride));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes, int width, int height,
                 int channels) {
  FilePtr file = open_file(path, "wb");
  ErrorSink sink;
  if (!encode(file.get(), bytes.data(), width, height, channels, sink)) {
    throw Error(ErrorKind::Io, path.string() + ": PNG encode failed: " + sink.message);
  }
  if (std::fflush(file.get()) != 0) {
    throw Error(ErrorKind::Io, path.string() + ": write failed");
  }
}

}  // namespace

std::uint8_t quantize_unit(float v) noexcept {
  const double clamped = v < 0.0f ? 0.0 : (v > 1.0f ? 1.0 : static_cast<double>(v));
  return static_cast<std::uint8_t>(std::floor(clamped * 255.0 + 0.5));
}

std::uint8_t trimap_byte(TrimapLabel label) noexcept {
  switch (label) {
    case TrimapLabel::Background: return 0;
    case TrimapLabel::Unknown: return 128;
    case TrimapLabel::Foreground: return 255;
  }
  return 0;
}

RasterImage load_png(const fs::path& path, std::vector<std::string>* warnings) {
  if (!fs::exists(path)) {
    throw Error(ErrorKind::Io, path.string() + ": file not found");
  }
  FilePtr file = open_file(path, "rb");
  Decoded decoded;
  ErrorSink sink;
  if (!decode(file.get(), decoded, sink)) {
    throw Error(ErrorKind::Format, path.string() + ": " + sink.message);
  }

  const int in_channels = decoded.channels;
  const bool has_alpha = in_channels == 2 || in_channels == 4;
  const int out_channels = in_channels <= 2 ? 1 : 3;
  if (has_alpha && warnings != nullptr) {
    warnings->push_back(path.string() + ": alpha channel dropped");
  }

  const double scale = decoded.bit_depth == 16 ? 65535.0 : 255.0;
  const int width = static_cast<int>(decoded.width);
  const int height = static_cast<int>(decoded.height);
  std::vector<float> data(static_cast<std::size_t>(width) * height * out_channels);
  std::size_t o = 0;
  for (int y = 0; y < height; ++y) {
    const png_byte* row = decoded.rows[y];
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < out_channels; ++c) {
        const std::size_t sample = static_cast<std::size_t>(x) * in_channels + c;
        unsigned value;
        if (decoded.bit_depth == 16) {
          value = (static_cast<unsigned>(row[2 * sample]) << 8) | row[2 * sample + 1];
        } else {
          value = row[sample];
        }
        data[o++] = static_cast<float>(value / scale);
      }
    }
  }
  return RasterImage(width, height, out_channels, std::move(data));
}

Dims png_dimensions(const fs::path& path) {
  if (!fs::exists(path)) {
    throw Error(ErrorKind::Io, path.string() + ": file not found");
  }
  FilePtr file = open_file(path, "rb");
  Decoded decoded;
  decoded.header_only = true;
  ErrorSink sink;
  if (!decode(file.get(), decoded, sink)) {
    throw Error(ErrorKind::Format, path.string() + ": " + sink.message);
  }
  return {static_cast<int>(decoded.width), static_cast<int>(decoded.height)};
}

void save_png(const RasterImage& image, const fs::path& path) {
  const auto src = image.data();
  std::vector<std::uint8_t> bytes(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) bytes[i] = quantize_unit(src[i]);
  write_bytes(path, bytes, image.width(), image.height(), image.channels());
}

void save_png(const AlphaMatte& alpha, const fs::path& path) {
  const auto src = alpha.data();
  std::vector<std::uint8_t> bytes(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) bytes[i] = quantize_unit(src[i]);
  write_bytes(path, bytes, alpha.width(), alpha.height(), 1);
}

void save_png(const BinaryMask& mask, const fs::path& path) {
  const auto src = mask.data();
  std::vector<std::uint8_t> bytes(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) bytes[i] = src[i] ? 255 : 0;
  write_bytes(path, bytes, mask.width(), mask.height(), 1);
}

void save_png(const Trimap& trimap, const fs::path& path) {
  const auto src = trimap.data();
  std::vector<std::uint8_t> bytes(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) bytes[i] = trimap_byte(src[i]);
  write_bytes(path, bytes, trimap.width(), trimap.height(), 1);
}

AlphaMatte alpha_from_image(const RasterImage& image) {
  const RasterImage gray = luminance(image);
  const auto src = gray.data();
  return AlphaMatte(gray.width(), gray.height(), std::vector<float>(src.begin(), src.end()));
}

BinaryMask mask_from_image(const RasterImage& image, int threshold_byte) {
  if (threshold_byte < 0 || threshold_byte > 255) {
    throw Error(ErrorKind::InvalidArgument, "mask threshold must be a byte value in [0,255]");
  }
  const RasterImage gray = luminance(image);
  const auto src = gray.data();
  std::vector<std::uint8_t> labels(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    labels[i] = quantize_unit(src[i]) >= threshold_byte ? 1 : 0;
  }
  return BinaryMask(gray.width(), gray.height(), std::move(labels));
}

}  // namespace smokesynth
