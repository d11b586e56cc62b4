#pragma once

#include <array>
#include <optional>

#include "json.hpp"
#include "radfabric/raster/grid.hpp"

namespace radfabric::anatomy {

using json = nlohmann::json;
using raster::Heatmap;
using raster::Region;
using raster::SegmentationMask;

inline constexpr double kDefaultTau = 0.4;

// Relabels each lung's cells Upper/Middle/Lower by splitting that lung's
// bounding-box rows into three bands; remainder rows go to the upper bands
// first (7 rows -> 3/2/2). Already-refined cells count as lung cells of their
// side. Throws invalid-input when the mask has no lung cells.
SegmentationMask partition_lung_fields(const SegmentationMask& mask);

// Partitions only when the mask holds unrefined lung cells and no refined
// ones; otherwise returns it unchanged.
SegmentationMask ensure_partitioned(const SegmentationMask& mask);

struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

struct SpatialCorrelation {
  double tau = kDefaultTau;
  // Sum of values over active cells (value >= tau).
  double active_mass = 0.0;
  std::size_t active_cells = 0;
  // Share of active mass per region, indexed by region code.
  std::array<double, raster::kRegionCount> fractions{};
  // Binary IoU between the active set and each region's cells.
  std::array<double, raster::kRegionCount> iou{};
  Region dominant = Region::kBackground;
  // Mass-weighted mean cell coordinate (x = column, y = row); empty when
  // there is no activation.
  std::optional<Point> centroid;

  bool has_activation() const { return active_mass > 0.0; }
  double fraction(Region r) const { return fractions[static_cast<std::size_t>(r)]; }
  bool operator==(const SpatialCorrelation&) const = default;
};

// Mass-weighted overlap of the heatmap's active cells with the mask's
// regions. Ties for the dominant region follow raster::kRegionPriority.
// With no active mass the result has all-zero fractions, Background as the
// dominant region and no centroid.
SpatialCorrelation correlate(const Heatmap& heatmap, const SegmentationMask& mask,
                             double tau = kDefaultTau);

json to_json(const SpatialCorrelation& c);
SpatialCorrelation correlation_from_json(const json& j);

}  // namespace radfabric::anatomy
