#include "terrakit/raster.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "terrakit/error.hpp"
#include "terrakit/io_util.hpp"
#include "terrakit/parallel.hpp"
#include "terrakit/tin.hpp"

namespace terrakit {
namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

/// Shortest round-trip form, always with a decimal point ("2.0" not "2").
std::string header_number(double v) {
  std::string s = shortest(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

char* append_fixed(char* out, char* limit, double v) {
  auto [end, ec] = std::to_chars(out, limit, v, std::chars_format::fixed, kAsciiGridDecimals);
  if (ec != std::errc{}) throw Error(Errc::invalid_input, "value too large for ASCII grid");
  return end;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

// Splits on blanks/tabs; returns false at end of input.
class LineReader {
public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    while (pos_ < text_.size()) {
      std::size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++number_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (line.find_first_not_of(" \t") != std::string_view::npos) return true;
    }
    return false;
  }
  std::size_t number() const { return number_; }

private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t number_ = 0;
};

template <class Fn>
std::size_t for_each_token(std::string_view line, Fn&& fn) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    fn(line.substr(i, j - i));
    ++count;
    i = j;
  }
  return count;
}

}  // namespace

std::optional<CellIndex> GridSpec::cell_of(double x, double y) const {
  const double fc = (x - xll) / cellsize;
  const double fr = (y_max() - y) / cellsize;
  if (!(fc >= 0.0) || !(fr > 0.0)) return std::nullopt;
  const auto col = static_cast<std::size_t>(fc);
  // y exactly on a south cell edge belongs to the cell above it (north-up rows).
  auto row = static_cast<std::size_t>(std::ceil(fr)) - 1;
  if (col >= ncols || row >= nrows) return std::nullopt;
  return CellIndex{row, col};
}

void GridSpec::validate(std::uint64_t max_cells) const {
  if (ncols == 0 || nrows == 0) throw Error(Errc::invalid_input, "grid has zero cells");
  if (!(cellsize > 0.0) || !std::isfinite(cellsize)) {
    throw Error(Errc::invalid_input, "cellsize must be a positive finite number");
  }
  if (!std::isfinite(xll) || !std::isfinite(yll) || !std::isfinite(nodata)) {
    throw Error(Errc::invalid_input, "grid origin and nodata must be finite");
  }
  if (nrows > max_cells / ncols) {
    throw Error(Errc::invalid_input, "grid of " + std::to_string(ncols) + " x " +
                                         std::to_string(nrows) + " cells exceeds the cap of " +
                                         std::to_string(max_cells));
  }
}

GridSpec grid_covering(double min_x, double min_y, double max_x, double max_y, double cellsize,
                       double nodata) {
  if (!(cellsize > 0.0)) throw Error(Errc::invalid_input, "cellsize must be positive");
  if (!(max_x >= min_x) || !(max_y >= min_y)) {
    throw Error(Errc::invalid_input, "empty bounding box");
  }
  GridSpec spec;
  spec.cellsize = cellsize;
  spec.nodata = nodata;
  spec.xll = std::floor(min_x / cellsize) * cellsize;
  spec.yll = std::floor(min_y / cellsize) * cellsize;
  spec.ncols = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((max_x - spec.xll) / cellsize)));
  spec.nrows = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((max_y - spec.yll) / cellsize)));
  return spec;
}

Raster rasterize_tin(const Tin& tin, const GridSpec& spec, unsigned workers) {
  spec.validate();
  Raster dem(spec, spec.nodata, RasterKind::continuous);
  parallel_rows(spec.nrows, workers, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t r = r0; r < r1; ++r) {
      for (std::size_t c = 0; c < spec.ncols; ++c) {
        const GeoPoint p = spec.cell_center(r, c);
        if (const auto z = tin.interpolate(p.x, p.y)) dem.at(r, c) = *z;
      }
    }
  });
  return dem;
}

std::string format_ascii_grid(const Raster& raster) {
  const auto& s = raster.spec;
  if (raster.values.size() != s.cell_count()) {
    throw Error(Errc::invalid_input, "raster value count does not match its grid");
  }
  const std::string nodata_token = shortest(s.nodata);
  std::string out;
  out += "ncols " + std::to_string(s.ncols) + "\n";
  out += "nrows " + std::to_string(s.nrows) + "\n";
  out += "xllcorner " + header_number(s.xll) + "\n";
  out += "yllcorner " + header_number(s.yll) + "\n";
  out += "cellsize " + header_number(s.cellsize) + "\n";
  out += "NODATA_value " + nodata_token + "\n";

  std::vector<char> line(s.ncols * 48 + 2);
  for (std::size_t r = 0; r < s.nrows; ++r) {
    char* p = line.data();
    char* const limit = line.data() + line.size();
    for (std::size_t c = 0; c < s.ncols; ++c) {
      if (c) *p++ = ' ';
      const double v = raster.at(r, c);
      if (raster.is_nodata(v)) {
        p = std::copy(nodata_token.begin(), nodata_token.end(), p);
      } else {
        if (!std::isfinite(v)) {
          throw Error(Errc::invalid_input, "non-finite raster value at row " + std::to_string(r) +
                                               ", col " + std::to_string(c));
        }
        p = append_fixed(p, limit, v);
      }
    }
    *p++ = '\n';
    out.append(line.data(), p);
  }
  return out;
}

Raster parse_ascii_grid(std::string_view text) {
  LineReader lines(text);
  std::string_view line;

  std::optional<double> ncols, nrows, xll, yll, cellsize;
  bool x_center = false, y_center = false;
  double nodata = kDefaultNodata;
  std::string nodata_token = shortest(kDefaultNodata);
  bool have_data_line = false;

  while (lines.next(line)) {
    std::vector<std::string_view> tokens;
    for_each_token(line, [&](std::string_view t) { tokens.push_back(t); });
    const unsigned char first = static_cast<unsigned char>(tokens[0][0]);
    if (!std::isalpha(first)) {
      have_data_line = true;
      break;
    }
    if (tokens.size() != 2) {
      throw Error(Errc::parse, "ASCII grid: header line " + std::to_string(lines.number()) +
                                   " must be '<key> <value>'");
    }
    const std::string key = lower(tokens[0]);
    double value = 0.0;
    if (!parse_double(tokens[1], value) || !std::isfinite(value)) {
      throw Error(Errc::parse, "ASCII grid: bad header value for '" + std::string(tokens[0]) + "'");
    }
    if (key == "ncols") ncols = value;
    else if (key == "nrows") nrows = value;
    else if (key == "xllcorner") xll = value;
    else if (key == "yllcorner") yll = value;
    else if (key == "xllcenter") { xll = value; x_center = true; }
    else if (key == "yllcenter") { yll = value; y_center = true; }
    else if (key == "cellsize") cellsize = value;
    else if (key == "nodata_value") {
      nodata = value;
      nodata_token = std::string(tokens[1]);
    } else {
      throw Error(Errc::parse, "ASCII grid: unknown header key '" + std::string(tokens[0]) + "'");
    }
  }
  if (!ncols || !nrows || !xll || !yll || !cellsize) {
    throw Error(Errc::parse, "ASCII grid: header needs ncols, nrows, xllcorner, yllcorner, cellsize");
  }
  if (*ncols < 1 || *nrows < 1 || *ncols != std::floor(*ncols) || *nrows != std::floor(*nrows)) {
    throw Error(Errc::parse, "ASCII grid: ncols/nrows must be positive integers");
  }

  GridSpec spec;
  spec.ncols = static_cast<std::size_t>(*ncols);
  spec.nrows = static_cast<std::size_t>(*nrows);
  spec.cellsize = *cellsize;
  spec.xll = x_center ? *xll - *cellsize / 2 : *xll;
  spec.yll = y_center ? *yll - *cellsize / 2 : *yll;
  spec.nodata = nodata;
  try {
    spec.validate();
  } catch (const Error& e) {
    throw Error(Errc::parse, std::string("ASCII grid: ") + e.what());
  }

  Raster raster(spec, nodata);
  std::size_t row = 0;
  if (have_data_line) {
    do {
      if (row >= spec.nrows) {
        throw Error(Errc::parse, "ASCII grid: more than nrows=" + std::to_string(spec.nrows) +
                                     " data rows");
      }
      std::size_t col = 0;
      bool bad = false;
      std::string bad_token;
      double* dst = raster.values.data() + row * spec.ncols;
      const std::size_t count = for_each_token(line, [&](std::string_view t) {
        if (col >= spec.ncols || bad) {
          ++col;
          return;
        }
        double v = 0.0;
        if (t == nodata_token) {
          v = nodata;
        } else if (!parse_double(t, v) || !std::isfinite(v)) {
          bad = true;
          bad_token = std::string(t);
          return;
        }
        dst[col++] = v;
      });
      if (bad) {
        throw Error(Errc::parse, "ASCII grid: non-numeric token '" + bad_token + "' on line " +
                                     std::to_string(lines.number()));
      }
      if (count != spec.ncols) {
        throw Error(Errc::parse, "ASCII grid: line " + std::to_string(lines.number()) + " has " +
                                     std::to_string(count) + " values, expected " +
                                     std::to_string(spec.ncols));
      }
      ++row;
    } while (lines.next(line));
  }
  if (row != spec.nrows) {
    throw Error(Errc::parse, "ASCII grid: found " + std::to_string(row) + " data rows, expected " +
                                 std::to_string(spec.nrows));
  }
  return raster;
}

void write_ascii_grid(const Raster& raster, const std::filesystem::path& path) {
  write_file_atomic(path, format_ascii_grid(raster));
}

Raster read_ascii_grid(const std::filesystem::path& path) {
  try {
    return parse_ascii_grid(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() == Errc::io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

double quantize_for_ascii(double value) {
  char buf[64];
  char* end = append_fixed(buf, buf + sizeof buf, value);
  double out = 0.0;
  std::from_chars(buf, end, out);
  return out;
}

RasterSummary raster_minmax_mean(const Raster& raster) {
  RasterSummary s;
  s.min = std::numeric_limits<double>::infinity();
  s.max = -std::numeric_limits<double>::infinity();
  CompensatedSum sum;
  for (double v : raster.values) {
    if (raster.is_nodata(v)) continue;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    sum.add(v);
    ++s.count;
  }
  if (s.count == 0) throw Error(Errc::degenerate, "raster has no data cells");
  s.mean = sum.value() / static_cast<double>(s.count);
  return s;
}

}  // namespace terrakit
