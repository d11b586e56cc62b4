#include <algorithm>
#include <limits>

#include "radfabric/anatomy/correlate.hpp"

namespace radfabric::anatomy {

namespace {

struct RowSpan {
  std::size_t top = std::numeric_limits<std::size_t>::max();
  std::size_t bottom = 0;
  bool any = false;

  void add(std::size_t row) {
    top = std::min(top, row);
    bottom = std::max(bottom, row);
    any = true;
  }
};

// Band index 0/1/2 for a row within [top, bottom].
int band_of(std::size_t row, const RowSpan& span) {
  const std::size_t height = span.bottom - span.top + 1;
  const std::size_t base = height / 3;
  const std::size_t rem = height % 3;
  const std::size_t upper = base + (rem >= 1 ? 1 : 0);
  const std::size_t middle = base + (rem >= 2 ? 1 : 0);
  const std::size_t offset = row - span.top;
  if (offset < upper) return 0;
  if (offset < upper + middle) return 1;
  return 2;
}

}  // namespace

SegmentationMask partition_lung_fields(const SegmentationMask& mask) {
  RowSpan left;
  RowSpan right;
  for (std::size_t y = 0; y < mask.height(); ++y) {
    for (std::size_t x = 0; x < mask.width(); ++x) {
      const Region r = mask.at(x, y);
      if (raster::is_left_lung(r)) left.add(y);
      if (raster::is_right_lung(r)) right.add(y);
    }
  }
  if (!left.any && !right.any) invalid_input("mask contains no lung cells to partition");

  static constexpr Region kLeftBands[3] = {Region::kLeftUpper, Region::kLeftMiddle,
                                           Region::kLeftLower};
  static constexpr Region kRightBands[3] = {Region::kRightUpper, Region::kRightMiddle,
                                            Region::kRightLower};
  SegmentationMask out = mask;
  for (std::size_t y = 0; y < mask.height(); ++y) {
    for (std::size_t x = 0; x < mask.width(); ++x) {
      const Region r = mask.at(x, y);
      if (raster::is_left_lung(r)) out.at(x, y) = kLeftBands[band_of(y, left)];
      else if (raster::is_right_lung(r)) out.at(x, y) = kRightBands[band_of(y, right)];
    }
  }
  return out;
}

SegmentationMask ensure_partitioned(const SegmentationMask& mask) {
  bool unrefined_lung = false;
  for (Region r : mask.cells()) {
    if (raster::is_refined(r)) return mask;
    if (r == Region::kLeftLung || r == Region::kRightLung) unrefined_lung = true;
  }
  return unrefined_lung ? partition_lung_fields(mask) : mask;
}

}  // namespace radfabric::anatomy
