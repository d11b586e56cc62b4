#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "radfabric/error.hpp"

namespace radfabric::raster {

// Row-major 2D raster.
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), cells_(width * height, fill) {}
  Grid(std::size_t width, std::size_t height, std::vector<T> cells)
      : width_(width), height_(height), cells_(std::move(cells)) {
    if (cells_.size() != width_ * height_) {
      invalid_input("grid cell count does not match width*height");
    }
  }

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  T& at(std::size_t x, std::size_t y) { return cells_[y * width_ + x]; }
  const T& at(std::size_t x, std::size_t y) const { return cells_[y * width_ + x]; }

  std::span<T> cells() { return cells_; }
  std::span<const T> cells() const { return cells_; }

  bool same_shape(std::size_t w, std::size_t h) const {
    return width_ == w && height_ == h;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return same_shape(other.width(), other.height());
  }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> cells_;
};

using RealGrid = Grid<double>;
using BinaryGrid = Grid<std::uint8_t>;

// A max-normalized activation map: every value finite and in [0,1].
class Heatmap {
 public:
  Heatmap() = default;
  // Validates the range; use normalize() to produce one from raw values.
  explicit Heatmap(RealGrid values);

  std::size_t width() const { return values_.width(); }
  std::size_t height() const { return values_.height(); }
  double at(std::size_t x, std::size_t y) const { return values_.at(x, y); }
  const RealGrid& grid() const { return values_; }
  std::span<const double> cells() const { return values_.cells(); }

  bool operator==(const Heatmap&) const = default;

 private:
  RealGrid values_;
};

// Anatomical region codes, as written in mask files.
enum class Region : std::uint8_t {
  kBackground = 0,
  kEsophagus = 1,
  kLeftLung = 2,
  kRightLung = 3,
  kDiaphragm = 4,
  kLeftUpper = 5,
  kLeftMiddle = 6,
  kLeftLower = 7,
  kRightUpper = 8,
  kRightMiddle = 9,
  kRightLower = 10,
};

inline constexpr std::size_t kRegionCount = 11;

// Code order used to break ties between equally weighted regions.
inline constexpr Region kRegionPriority[kRegionCount] = {
    Region::kLeftLung,   Region::kLeftUpper,   Region::kLeftMiddle,
    Region::kLeftLower,  Region::kRightLung,   Region::kRightUpper,
    Region::kRightMiddle, Region::kRightLower, Region::kDiaphragm,
    Region::kEsophagus,  Region::kBackground,
};

std::string_view region_name(Region r);
std::optional<Region> region_from_code(int code);
std::optional<Region> region_from_name(std::string_view name);
bool is_left_lung(Region r);
bool is_right_lung(Region r);
bool is_refined(Region r);

using SegmentationMask = Grid<Region>;

// Negatives clamped to 0, then divided by the maximum when it is positive.
Heatmap normalize(const RealGrid& raw);

// Cell active iff value >= tau. tau must lie in [0,1].
BinaryGrid threshold(const Heatmap& h, double tau);

// Corner-aligned bilinear resampling: output corners coincide with input
// corners, so sample (i,j) maps to input coordinate i*(w_in-1)/(w_out-1).
RealGrid upsample_bilinear(const RealGrid& grid, std::size_t out_width,
                           std::size_t out_height);

}  // namespace radfabric::raster
