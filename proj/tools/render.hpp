#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "terrakit/profile.hpp"
#include "terrakit/raster.hpp"

namespace terrakit::cli {

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 255;
  friend bool operator==(const Rgba&, const Rgba&) = default;
};

struct Image {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<Rgba> pixels;  ///< row-major, top row first

  Image() = default;
  Image(std::size_t w, std::size_t h, Rgba fill) : width(w), height(h), pixels(w * h, fill) {}
  Rgba& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
  const Rgba& at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
};

enum class ColorStyle { ramp, gray, categorical };

/**
 * One pixel per cell, nodata fully transparent.
 *
 * ramp: the value is scaled linearly to t in [0, 1] between the raster's
 * min and max (t = 0 for a constant raster) and mapped through five evenly
 * spaced stops, green (38,115,0) -> light green (137,181,65) -> sand
 * (242,224,138) -> brown (189,128,72) -> white (255,255,255).
 * gray: the value, clamped to [0, 255] and rounded, is the gray level
 * (hillshade output).
 * categorical: integer codes index a fixed 16-color palette (code mod 16).
 */
Image render_raster(const Raster& raster, ColorStyle style);

/// Distance/elevation line plot with labelled axes; knickpoints as red ticks.
Image render_profile(const ProfileSeries& profile, const std::vector<Knickpoint>& knickpoints = {});

/// RGBA, 8 bits per channel, no timestamp or text chunks: identical images
/// give identical bytes.
std::string encode_png(const Image& image);
void write_png(const Image& image, const std::filesystem::path& path);

/// Minimal decoder for the files written above (tests and tooling).
Image decode_png(const std::filesystem::path& path);

}  // namespace terrakit::cli
