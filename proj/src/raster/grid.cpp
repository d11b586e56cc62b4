#include "radfabric/raster/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace radfabric::raster {

namespace {

struct RegionEntry {
  Region region;
  std::string_view name;
};

constexpr std::array<RegionEntry, kRegionCount> kRegionNames = {{
    {Region::kBackground, "Background"},
    {Region::kEsophagus, "Esophagus"},
    {Region::kLeftLung, "LeftLung"},
    {Region::kRightLung, "RightLung"},
    {Region::kDiaphragm, "Diaphragm"},
    {Region::kLeftUpper, "LeftUpper"},
    {Region::kLeftMiddle, "LeftMiddle"},
    {Region::kLeftLower, "LeftLower"},
    {Region::kRightUpper, "RightUpper"},
    {Region::kRightMiddle, "RightMiddle"},
    {Region::kRightLower, "RightLower"},
}};

}  // namespace

Heatmap::Heatmap(RealGrid values) : values_(std::move(values)) {
  for (double v : values_.cells()) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      invalid_input("heatmap values must be finite and within [0,1]");
    }
  }
}

std::string_view region_name(Region r) {
  return kRegionNames[static_cast<std::size_t>(r)].name;
}

std::optional<Region> region_from_code(int code) {
  if (code < 0 || code >= static_cast<int>(kRegionCount)) return std::nullopt;
  return static_cast<Region>(code);
}

std::optional<Region> region_from_name(std::string_view name) {
  for (const auto& e : kRegionNames) {
    if (e.name == name) return e.region;
  }
  return std::nullopt;
}

bool is_left_lung(Region r) {
  return r == Region::kLeftLung || r == Region::kLeftUpper ||
         r == Region::kLeftMiddle || r == Region::kLeftLower;
}

bool is_right_lung(Region r) {
  return r == Region::kRightLung || r == Region::kRightUpper ||
         r == Region::kRightMiddle || r == Region::kRightLower;
}

bool is_refined(Region r) {
  return static_cast<int>(r) >= static_cast<int>(Region::kLeftUpper);
}

Heatmap normalize(const RealGrid& raw) {
  double peak = 0.0;
  for (double v : raw.cells()) {
    if (!std::isfinite(v)) invalid_input("cannot normalize non-finite values");
    peak = std::max(peak, v);
  }
  RealGrid out(raw.width(), raw.height(), 0.0);
  if (peak > 0.0) {
    auto src = raw.cells();
    auto dst = out.cells();
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i] = std::max(0.0, src[i]) / peak;
    }
  }
  return Heatmap(std::move(out));
}

BinaryGrid threshold(const Heatmap& h, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) invalid_input("tau must lie in [0,1]");
  BinaryGrid out(h.width(), h.height(), 0);
  auto src = h.cells();
  auto dst = out.cells();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= tau ? 1 : 0;
  return out;
}

RealGrid upsample_bilinear(const RealGrid& grid, std::size_t out_width,
                           std::size_t out_height) {
  if (grid.width() == 0 || grid.height() == 0) {
    invalid_input("cannot resample an empty grid");
  }
  if (out_width == 0 || out_height == 0) {
    invalid_input("output dimensions must be at least 1");
  }
  if (grid.same_shape(out_width, out_height)) return grid;

  const std::size_t w = grid.width();
  const std::size_t h = grid.height();
  // a + (b-a)t reproduces a exactly when a == b, so constant grids stay
  // bitwise constant.
  auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };
  auto source = [](std::size_t i, std::size_t n_out, std::size_t n_in) {
    if (n_out == 1 || n_in == 1) return 0.0;
    return static_cast<double>(i) * static_cast<double>(n_in - 1) /
           static_cast<double>(n_out - 1);
  };

  RealGrid out(out_width, out_height, 0.0);
  for (std::size_t y = 0; y < out_height; ++y) {
    const double sy = source(y, out_height, h);
    const std::size_t y0 = std::min(static_cast<std::size_t>(sy), h - 1);
    const std::size_t y1 = std::min(y0 + 1, h - 1);
    const double fy = sy - static_cast<double>(y0);
    for (std::size_t x = 0; x < out_width; ++x) {
      const double sx = source(x, out_width, w);
      const std::size_t x0 = std::min(static_cast<std::size_t>(sx), w - 1);
      const std::size_t x1 = std::min(x0 + 1, w - 1);
      const double fx = sx - static_cast<double>(x0);
      const double top = lerp(grid.at(x0, y0), grid.at(x1, y0), fx);
      const double bottom = lerp(grid.at(x0, y1), grid.at(x1, y1), fx);
      out.at(x, y) = lerp(top, bottom, fy);
    }
  }
  return out;
}

}  // namespace radfabric::raster
