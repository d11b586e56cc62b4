#include "radfabric/anatomy/correlate.hpp"

#include <string>

namespace radfabric::anatomy {

SpatialCorrelation correlate(const Heatmap& heatmap, const SegmentationMask& mask, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) invalid_input("tau must lie in [0,1]");
  if (!mask.same_shape(heatmap.width(), heatmap.height())) {
    invalid_input("heatmap is " + std::to_string(heatmap.width()) + "x" +
                  std::to_string(heatmap.height()) + " but mask is " +
                  std::to_string(mask.width()) + "x" + std::to_string(mask.height()));
  }

  SpatialCorrelation c;
  c.tau = tau;
  std::array<double, raster::kRegionCount> mass{};
  std::array<std::size_t, raster::kRegionCount> region_cells{};
  std::array<std::size_t, raster::kRegionCount> active_in_region{};
  double sum_x = 0.0;
  double sum_y = 0.0;

  for (std::size_t y = 0; y < mask.height(); ++y) {
    for (std::size_t x = 0; x < mask.width(); ++x) {
      const auto r = static_cast<std::size_t>(mask.at(x, y));
      ++region_cells[r];
      const double v = heatmap.at(x, y);
      if (v < tau) continue;
      ++c.active_cells;
      ++active_in_region[r];
      c.active_mass += v;
      mass[r] += v;
      sum_x += v * static_cast<double>(x);
      sum_y += v * static_cast<double>(y);
    }
  }

  for (std::size_t r = 0; r < raster::kRegionCount; ++r) {
    const std::size_t uni = c.active_cells + region_cells[r] - active_in_region[r];
    c.iou[r] = uni == 0 ? 0.0
                        : static_cast<double>(active_in_region[r]) / static_cast<double>(uni);
  }
  if (!c.has_activation()) return c;

  for (std::size_t r = 0; r < raster::kRegionCount; ++r) c.fractions[r] = mass[r] / c.active_mass;
  c.centroid = Point{sum_x / c.active_mass, sum_y / c.active_mass};

  double best = -1.0;
  for (Region r : raster::kRegionPriority) {
    if (c.fraction(r) > best) {
      best = c.fraction(r);
      c.dominant = r;
    }
  }
  return c;
}

json to_json(const SpatialCorrelation& c) {
  json fractions = json::object();
  json iou = json::object();
  for (std::size_t r = 0; r < raster::kRegionCount; ++r) {
    const std::string name(raster::region_name(static_cast<Region>(r)));
    fractions[name] = c.fractions[r];
    iou[name] = c.iou[r];
  }
  json j = {{"tau", c.tau},
            {"active_mass", c.active_mass},
            {"active_cells", c.active_cells},
            {"fractions", fractions},
            {"iou", iou},
            {"dominant_region", raster::region_name(c.dominant)},
            {"no_activation", !c.has_activation()}};
  j["centroid"] = c.centroid ? json{{"x", c.centroid->x}, {"y", c.centroid->y}} : json(nullptr);
  return j;
}

SpatialCorrelation correlation_from_json(const json& j) {
  SpatialCorrelation c;
  c.tau = j.at("tau").get<double>();
  c.active_mass = j.at("active_mass").get<double>();
  c.active_cells = j.value("active_cells", std::size_t{0});
  for (std::size_t r = 0; r < raster::kRegionCount; ++r) {
    const std::string name(raster::region_name(static_cast<Region>(r)));
    c.fractions[r] = j.at("fractions").value(name, 0.0);
    c.iou[r] = j.contains("iou") ? j["iou"].value(name, 0.0) : 0.0;
  }
  auto dominant = raster::region_from_name(j.at("dominant_region").get<std::string>());
  if (!dominant) invalid_input("unknown region in correlation record");
  c.dominant = *dominant;
  if (j.contains("centroid") && j["centroid"].is_object()) {
    c.centroid = Point{j["centroid"].at("x").get<double>(), j["centroid"].at("y").get<double>()};
  }
  return c;
}

}  // namespace radfabric::anatomy
