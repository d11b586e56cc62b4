#pragma once

// Brute-force reference computations shared by the unit tests and the
// acceptance runner. They are written independently of the library code and
// only rely on the public data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "radfabric/raster/gradcam.hpp"
#include "radfabric/raster/grid.hpp"

namespace oracle {

using radfabric::raster::FeatureStack;
using radfabric::raster::Heatmap;
using radfabric::raster::RealGrid;
using radfabric::raster::Region;
using radfabric::raster::SegmentationMask;

// Bilinear resampling written as the four-corner weighted sum.
inline double sample(const RealGrid& g, double sx, double sy) {
  const auto ix = static_cast<std::size_t>(std::floor(sx));
  const auto iy = static_cast<std::size_t>(std::floor(sy));
  const std::size_t x0 = std::min(ix, g.width() - 1), x1 = std::min(x0 + 1, g.width() - 1);
  const std::size_t y0 = std::min(iy, g.height() - 1), y1 = std::min(y0 + 1, g.height() - 1);
  const double fx = sx - static_cast<double>(x0), fy = sy - static_cast<double>(y0);
  return (1 - fx) * (1 - fy) * g.at(x0, y0) + fx * (1 - fy) * g.at(x1, y0) +
         (1 - fx) * fy * g.at(x0, y1) + fx * fy * g.at(x1, y1);
}

inline RealGrid resample(const RealGrid& g, std::size_t w, std::size_t h) {
  RealGrid out(w, h, 0.0);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double sx = w == 1 ? 0.0 : double(x) * double(g.width() - 1) / double(w - 1);
      const double sy = h == 1 ? 0.0 : double(y) * double(g.height() - 1) / double(h - 1);
      out.at(x, y) = sample(g, sx, sy);
    }
  }
  return out;
}

// Grad-CAM from first principles with long-double accumulation.
inline RealGrid gradcam(const FeatureStack& s, std::size_t w, std::size_t h) {
  const std::size_t fw = s.activations[0].width(), fh = s.activations[0].height();
  RealGrid raw(fw, fh, 0.0);
  for (std::size_t y = 0; y < fh; ++y) {
    for (std::size_t x = 0; x < fw; ++x) {
      long double acc = 0;
      for (std::size_t k = 0; k < s.channels(); ++k) {
        long double gsum = 0;
        for (std::size_t yy = 0; yy < fh; ++yy)
          for (std::size_t xx = 0; xx < fw; ++xx) gsum += s.gradients[k].at(xx, yy);
        acc += gsum / (long double)(fw * fh) * s.activations[k].at(x, y);
      }
      raw.at(x, y) = acc > 0 ? double(acc) : 0.0;
    }
  }
  RealGrid up = (fw == w && fh == h) ? raw : resample(raw, w, h);
  double peak = 0;
  for (double v : up.cells()) peak = std::max(peak, v);
  for (double& v : up.cells()) v = peak > 0 ? std::max(0.0, v) / peak : 0.0;
  return up;
}

inline FeatureStack random_stack(std::mt19937_64& rng, std::size_t channels, std::size_t w,
                                 std::size_t h) {
  std::normal_distribution<double> n(0.0, 1.0);
  FeatureStack s;
  for (std::size_t k = 0; k < channels; ++k) {
    RealGrid a(w, h), g(w, h);
    for (double& v : a.cells()) v = std::abs(n(rng));  // post-ReLU activations
    for (double& v : g.cells()) v = n(rng);
    s.activations.push_back(std::move(a));
    s.gradients.push_back(std::move(g));
  }
  return s;
}

struct Overlap {
  double mass = 0;
  std::size_t active = 0;
  std::array<double, radfabric::raster::kRegionCount> fractions{};
  std::array<double, radfabric::raster::kRegionCount> iou{};
  Region dominant = Region::kBackground;
  bool has_centroid = false;
  double cx = 0, cy = 0;
};

// Row-major accumulation, so sums match a row-major implementation bit for bit.
inline Overlap overlap(const Heatmap& hm, const SegmentationMask& mask, double tau) {
  constexpr std::size_t R = radfabric::raster::kRegionCount;
  Overlap o;
  std::array<double, R> per{};
  std::array<std::size_t, R> inside{}, total{};
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    const std::size_t x = i % mask.width(), y = i / mask.width();
    const auto r = static_cast<std::size_t>(mask.cells()[i]);
    total[r] += 1;
    const double v = hm.cells()[i];
    if (!(v >= tau)) continue;
    o.mass += v;
    o.active += 1;
    per[r] += v;
    inside[r] += 1;
    sx += v * double(x);
    sy += v * double(y);
  }
  for (std::size_t r = 0; r < R; ++r) {
    const std::size_t uni = o.active + total[r] - inside[r];
    o.iou[r] = uni ? double(inside[r]) / double(uni) : 0.0;
  }
  if (o.mass > 0) {
    for (std::size_t r = 0; r < R; ++r) o.fractions[r] = per[r] / o.mass;
    o.has_centroid = true;
    o.cx = sx / o.mass;
    o.cy = sy / o.mass;
    const double top = *std::max_element(o.fractions.begin(), o.fractions.end());
    for (Region r : radfabric::raster::kRegionPriority) {
      if (o.fractions[static_cast<std::size_t>(r)] == top) {
        o.dominant = r;
        break;
      }
    }
  }
  return o;
}

inline Heatmap random_heatmap(std::mt19937_64& rng, std::size_t w, std::size_t h) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealGrid g(w, h);
  for (double& v : g.cells()) v = u(rng) < 0.2 ? 0.0 : u(rng);
  return Heatmap(std::move(g));
}

inline SegmentationMask random_mask(std::mt19937_64& rng, std::size_t w, std::size_t h) {
  std::uniform_int_distribution<int> code(0, 10);
  SegmentationMask m(w, h);
  for (auto& r : m.cells()) r = static_cast<Region>(code(rng));
  return m;
}

}  // namespace oracle
