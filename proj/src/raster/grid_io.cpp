#include "radfabric/raster/grid_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace radfabric::raster {

namespace {

class Tokens {
 public:
  explicit Tokens(std::string_view text) : text_(text) {}

  std::string_view next() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    std::size_t start = pos_;
    while (pos_ < text_.size() && !is_space(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  }
  std::string_view text_;
  std::size_t pos_ = 0;
};

template <typename T>
T parse_number(std::string_view tok, const char* what) {
  if (tok.empty()) fail(ErrorKind::kFormat, std::string("grid file truncated: expected ") + what);
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    fail(ErrorKind::kFormat, "grid file: bad " + std::string(what) + " '" +
                                 std::string(tok) + "'");
  }
  return value;
}

std::pair<std::size_t, std::size_t> parse_header(Tokens& tokens) {
  auto w = parse_number<long long>(tokens.next(), "width");
  auto h = parse_number<long long>(tokens.next(), "height");
  if (w <= 0 || h <= 0) fail(ErrorKind::kFormat, "grid file: dimensions must be positive");
  return {static_cast<std::size_t>(w), static_cast<std::size_t>(h)};
}

void expect_end(Tokens& tokens) {
  if (!tokens.next().empty()) fail(ErrorKind::kFormat, "grid file: trailing values");
}

}  // namespace

RealGrid parse_real_grid(std::string_view text) {
  Tokens tokens(text);
  auto [w, h] = parse_header(tokens);
  std::vector<double> cells;
  cells.reserve(w * h);
  for (std::size_t i = 0; i < w * h; ++i) {
    double v = parse_number<double>(tokens.next(), "value");
    if (!std::isfinite(v)) fail(ErrorKind::kFormat, "grid file: non-finite value");
    cells.push_back(v);
  }
  expect_end(tokens);
  return RealGrid(w, h, std::move(cells));
}

SegmentationMask parse_mask(std::string_view text) {
  Tokens tokens(text);
  auto [w, h] = parse_header(tokens);
  std::vector<Region> cells;
  cells.reserve(w * h);
  for (std::size_t i = 0; i < w * h; ++i) {
    int code = parse_number<int>(tokens.next(), "region code");
    auto region = region_from_code(code);
    if (!region) fail(ErrorKind::kFormat, "mask file: unknown region code " + std::to_string(code));
    cells.push_back(*region);
  }
  expect_end(tokens);
  return SegmentationMask(w, h, std::move(cells));
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_real_grid(const RealGrid& grid) {
  std::string out = std::to_string(grid.width()) + " " + std::to_string(grid.height()) + "\n";
  for (std::size_t y = 0; y < grid.height(); ++y) {
    for (std::size_t x = 0; x < grid.width(); ++x) {
      if (x) out += ' ';
      out += format_real(grid.at(x, y));
    }
    out += '\n';
  }
  return out;
}

std::string format_mask(const SegmentationMask& mask) {
  std::string out = std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n";
  for (std::size_t y = 0; y < mask.height(); ++y) {
    for (std::size_t x = 0; x < mask.width(); ++x) {
      if (x) out += ' ';
      out += std::to_string(static_cast<int>(mask.at(x, y)));
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kNotFound, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorKind::kIo, "write failed for '" + path.string() + "'");
}

Heatmap read_heatmap(const std::filesystem::path& path) {
  try {
    return Heatmap(parse_real_grid(read_text_file(path)));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNotFound) throw;
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

SegmentationMask read_mask(const std::filesystem::path& path) {
  try {
    return parse_mask(read_text_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kNotFound) throw;
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

void write_real_grid(const std::filesystem::path& path, const RealGrid& grid) {
  write_text_file(path, format_real_grid(grid));
}

void write_mask(const std::filesystem::path& path, const SegmentationMask& mask) {
  write_text_file(path, format_mask(mask));
}

}  // namespace radfabric::raster
