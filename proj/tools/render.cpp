#include "render.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

#include "terrakit/error.hpp"
#include "terrakit/io_util.hpp"

namespace terrakit::cli {
namespace {

constexpr std::array<Rgba, 5> kRamp = {{{38, 115, 0, 255},
                                        {137, 181, 65, 255},
                                        {242, 224, 138, 255},
                                        {189, 128, 72, 255},
                                        {255, 255, 255, 255}}};

constexpr std::array<Rgba, 16> kPalette = {{{200, 200, 200, 255}, {31, 119, 180, 255},
                                            {255, 127, 14, 255},  {44, 160, 44, 255},
                                            {214, 39, 40, 255},   {148, 103, 189, 255},
                                            {140, 86, 75, 255},   {227, 119, 194, 255},
                                            {127, 127, 127, 255}, {188, 189, 34, 255},
                                            {23, 190, 207, 255},  {0, 0, 128, 255},
                                            {128, 0, 0, 255},     {0, 128, 0, 255},
                                            {255, 215, 0, 255},   {0, 0, 0, 255}}};

constexpr Rgba kTransparent{0, 0, 0, 0};
constexpr Rgba kWhite{255, 255, 255, 255};
constexpr Rgba kBlack{0, 0, 0, 255};
constexpr Rgba kGrid{225, 225, 225, 255};
constexpr Rgba kLine{31, 90, 160, 255};
constexpr Rgba kMarker{214, 39, 40, 255};

std::uint8_t channel(double a, double b, double f) {
  return static_cast<std::uint8_t>(std::lround(a + (b - a) * f));
}

Rgba ramp_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const double s = t * (kRamp.size() - 1);
  const auto i = std::min<std::size_t>(static_cast<std::size_t>(s), kRamp.size() - 2);
  const double f = s - static_cast<double>(i);
  const Rgba& a = kRamp[i];
  const Rgba& b = kRamp[i + 1];
  return {channel(a.r, b.r, f), channel(a.g, b.g, f), channel(a.b, b.b, f), 255};
}

// 5x7 bitmap glyphs, one string of five '#'/'.' per row.
const std::map<char, std::array<const char*, 7>>& font() {
  static const std::map<char, std::array<const char*, 7>> glyphs = {
      {'0', {".###.", "#...#", "#..##", "#.#.#", "##..#", "#...#", ".###."}},
      {'1', {"..#..", ".##..", "..#..", "..#..", "..#..", "..#..", ".###."}},
      {'2', {".###.", "#...#", "....#", "...#.", "..#..", ".#...", "#####"}},
      {'3', {"#####", "...#.", "..#..", "...#.", "....#", "#...#", ".###."}},
      {'4', {"...#.", "..##.", ".#.#.", "#..#.", "#####", "...#.", "...#."}},
      {'5', {"#####", "#....", "####.", "....#", "....#", "#...#", ".###."}},
      {'6', {"..##.", ".#...", "#....", "####.", "#...#", "#...#", ".###."}},
      {'7', {"#####", "....#", "...#.", "..#..", ".#...", ".#...", ".#..."}},
      {'8', {".###.", "#...#", "#...#", ".###.", "#...#", "#...#", ".###."}},
      {'9', {".###.", "#...#", "#...#", ".####", "....#", "...#.", ".##.."}},
      {'.', {".....", ".....", ".....", ".....", ".....", ".##..", ".##.."}},
      {'-', {".....", ".....", ".....", "#####", ".....", ".....", "....."}},
      {'(', {"...#.", "..#..", ".#...", ".#...", ".#...", "..#..", "...#."}},
      {')', {".#...", "..#..", "...#.", "...#.", "...#.", "..#..", ".#..."}},
      {'a', {".....", ".....", ".###.", "....#", ".####", "#...#", ".####"}},
      {'c', {".....", ".....", ".###.", "#....", "#....", "#...#", ".###."}},
      {'d', {"....#", "....#", ".##.#", "#..##", "#...#", "#...#", ".####"}},
      {'e', {".....", ".....", ".###.", "#...#", "#####", "#....", ".###."}},
      {'i', {"..#..", ".....", ".##..", "..#..", "..#..", "..#..", ".###."}},
      {'l', {".##..", "..#..", "..#..", "..#..", "..#..", "..#..", ".###."}},
      {'m', {".....", ".....", "##.#.", "#.#.#", "#.#.#", "#...#", "#...#"}},
      {'n', {".....", ".....", "#.##.", "##..#", "#...#", "#...#", "#...#"}},
      {'o', {".....", ".....", ".###.", "#...#", "#...#", "#...#", ".###."}},
      {'s', {".....", ".....", ".###.", "#....", ".###.", "....#", "####."}},
      {'t', {".#...", ".#...", "###..", ".#...", ".#...", ".#..#", "..##."}},
      {'v', {".....", ".....", "#...#", "#...#", "#...#", ".#.#.", "..#.."}},
  };
  return glyphs;
}

constexpr int kGlyphAdvance = 6;

int text_width(const std::string& s) { return static_cast<int>(s.size()) * kGlyphAdvance - 1; }

void put(Image& img, long x, long y, Rgba c) {
  if (x < 0 || y < 0 || x >= static_cast<long>(img.width) || y >= static_cast<long>(img.height)) return;
  img.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) = c;
}

void draw_text(Image& img, long x, long y, const std::string& s, Rgba c) {
  for (char ch : s) {
    const auto it = font().find(ch);
    if (it != font().end()) {
      for (int r = 0; r < 7; ++r)
        for (int k = 0; k < 5; ++k)
          if (it->second[r][k] == '#') put(img, x + k, y + r, c);
    }
    x += kGlyphAdvance;
  }
}

void draw_line(Image& img, long x0, long y0, long x1, long y1, Rgba c) {
  const long dx = std::labs(x1 - x0), dy = -std::labs(y1 - y0);
  const long sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
  long err = dx + dy;
  while (true) {
    put(img, x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const long e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
  }
}

double nice_step(double range) {
  const double raw = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  return (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0) * mag;
}

std::string tick_label(double v, double step) {
  const int decimals = step >= 1.0 ? 0 : static_cast<int>(std::ceil(-std::log10(step) - 1e-9));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v == 0.0 ? 0.0 : v);
  std::string s(buf);
  if (s == "-0") s = "0";
  return s;
}

std::vector<double> ticks(double lo, double hi, double step) {
  std::vector<double> out;
  const double first = std::ceil(lo / step - 1e-9);
  for (double k = first;; k += 1.0) {
    const double v = k * step;
    if (v > hi + step * 1e-9) break;
    out.push_back(v);
  }
  return out;
}

}  // namespace

Image render_raster(const Raster& raster, ColorStyle style) {
  Image img(raster.spec.ncols, raster.spec.nrows, kTransparent);
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (double v : raster.values) {
    if (raster.is_nodata(v)) continue;
    lo = any ? std::min(lo, v) : v;
    hi = any ? std::max(hi, v) : v;
    any = true;
  }
  for (std::size_t k = 0; k < raster.values.size(); ++k) {
    const double v = raster.values[k];
    if (raster.is_nodata(v)) continue;
    Rgba c;
    switch (style) {
      case ColorStyle::ramp:
        c = ramp_color(hi > lo ? (v - lo) / (hi - lo) : 0.0);
        break;
      case ColorStyle::gray: {
        const auto g = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
        c = {g, g, g, 255};
        break;
      }
      case ColorStyle::categorical: {
        const auto code = static_cast<long long>(std::floor(v));
        c = kPalette[static_cast<std::size_t>(((code % 16) + 16) % 16)];
        break;
      }
    }
    img.pixels[k] = c;
  }
  return img;
}

Image render_profile(const ProfileSeries& profile, const std::vector<Knickpoint>& knickpoints) {
  constexpr long kW = 800, kH = 400, kLeft = 70, kRight = 780, kTop = 24, kBottom = 350;
  Image img(kW, kH, kWhite);

  const double length = profile.length() > 0 ? profile.length() : 1.0;
  double lo = 0.0, hi = 0.0;
  bool any = false;
  for (const auto& s : profile.samples) {
    if (!s.elevation_m) continue;
    lo = any ? std::min(lo, *s.elevation_m) : *s.elevation_m;
    hi = any ? std::max(hi, *s.elevation_m) : *s.elevation_m;
    any = true;
  }
  if (!any) {
    lo = 0.0;
    hi = 1.0;
  } else if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }

  auto px = [&](double d) { return kLeft + std::lround(d / length * (kRight - kLeft)); };
  auto py = [&](double z) { return kBottom - std::lround((z - lo) / (hi - lo) * (kBottom - kTop)); };

  const double xs = nice_step(length), ys = nice_step(hi - lo);
  for (double v : ticks(0.0, length, xs)) {
    const long x = px(v);
    draw_line(img, x, kTop, x, kBottom, kGrid);
    draw_line(img, x, kBottom, x, kBottom + 4, kBlack);
    const auto label = tick_label(v, xs);
    draw_text(img, x - text_width(label) / 2, kBottom + 8, label, kBlack);
  }
  for (double v : ticks(lo, hi, ys)) {
    const long y = py(v);
    draw_line(img, kLeft, y, kRight, y, kGrid);
    draw_line(img, kLeft - 4, y, kLeft, y, kBlack);
    const auto label = tick_label(v, ys);
    draw_text(img, kLeft - 8 - text_width(label), y - 3, label, kBlack);
  }
  draw_line(img, kLeft, kTop, kLeft, kBottom, kBlack);
  draw_line(img, kLeft, kBottom, kRight, kBottom, kBlack);
  const std::string xlabel = "distance (m)";
  draw_text(img, (kLeft + kRight) / 2 - text_width(xlabel) / 2, kBottom + 28, xlabel, kBlack);
  draw_text(img, 8, 8, "elevation (m)", kBlack);

  for (const auto& k : knickpoints) {
    const long x = px(k.distance_m);
    draw_line(img, x, kTop, x, kBottom, kMarker);
  }

  const ProfileSample* prev = nullptr;
  for (const auto& s : profile.samples) {
    if (!s.elevation_m) {
      prev = nullptr;
      continue;
    }
    if (prev) draw_line(img, px(prev->distance_m), py(*prev->elevation_m), px(s.distance_m), py(*s.elevation_m), kLine);
    else put(img, px(s.distance_m), py(*s.elevation_m), kLine);
    prev = &s;
  }
  return img;
}

std::string encode_png(const Image& image) {
  if (image.width == 0 || image.height == 0) throw Error(Errc::invalid_input, "cannot encode an empty image");
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  desc.width = static_cast<png_uint_32>(image.width);
  desc.height = static_cast<png_uint_32>(image.height);
  desc.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> raw;
  raw.reserve(image.pixels.size() * 4);
  for (const auto& p : image.pixels) raw.insert(raw.end(), {p.r, p.g, p.b, p.a});

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&desc, nullptr, &size, 0, raw.data(), 0, nullptr)) {
    throw Error(Errc::io, std::string("PNG encoding failed: ") + desc.message);
  }
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&desc, out.data(), &size, 0, raw.data(), 0, nullptr)) {
    throw Error(Errc::io, std::string("PNG encoding failed: ") + desc.message);
  }
  out.resize(size);
  return out;
}

void write_png(const Image& image, const std::filesystem::path& path) {
  write_file_atomic(path, encode_png(image));
}

Image decode_png(const std::filesystem::path& path) {
  const std::string bytes = read_text_file(path);
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&desc, bytes.data(), bytes.size())) {
    throw Error(Errc::parse, path.string() + ": " + desc.message);
  }
  desc.format = PNG_FORMAT_RGBA;
  std::vector<std::uint8_t> raw(PNG_IMAGE_SIZE(desc));
  if (!png_image_finish_read(&desc, nullptr, raw.data(), 0, nullptr)) {
    png_image_free(&desc);
    throw Error(Errc::parse, path.string() + ": " + desc.message);
  }
  Image img(desc.width, desc.height, kTransparent);
  for (std::size_t k = 0; k < img.pixels.size(); ++k) {
    img.pixels[k] = {raw[4 * k], raw[4 * k + 1], raw[4 * k + 2], raw[4 * k + 3]};
  }
  return img;
}

}  // namespace terrakit::cli
