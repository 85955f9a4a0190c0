#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "smokesynth/image.hpp"

namespace smokesynth {

/// Decodes an 8- or 16-bit gray, gray+alpha, RGB or RGBA PNG into unit
/// interval values (v / (2^depth - 1)). Alpha channels are dropped and a
/// note is appended to `warnings` when it is non-null. Palette and sub-byte
/// depths are rejected.
RasterImage load_png(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

/// Reads only the IHDR chunk.
Dims png_dimensions(const std::filesystem::path& path);

/// Writes 8-bit PNGs. Reals are quantized by round-half-up of v*255, masks
/// as {0,255}, trimaps as {0,128,255} for background/unknown/foreground.
void save_png(const RasterImage& image, const std::filesystem::path& path);
void save_png(const AlphaMatte& alpha, const std::filesystem::path& path);
void save_png(const BinaryMask& mask, const std::filesystem::path& path);
void save_png(const Trimap& trimap, const std::filesystem::path& path);

/// round-half-up(v * 255), with v clamped to [0,1] first.
std::uint8_t quantize_unit(float v) noexcept;

std::uint8_t trimap_byte(TrimapLabel label) noexcept;

/// Single-channel view of a decoded image: gray images as-is, RGB through
/// luminance.
AlphaMatte alpha_from_image(const RasterImage& image);

/// Pixels whose quantized byte value is >= `threshold_byte` become 1.
BinaryMask mask_from_image(const RasterImage& image, int threshold_byte = 128);

}  // namespace smokesynth
