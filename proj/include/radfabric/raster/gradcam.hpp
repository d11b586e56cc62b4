#pragma once

#include <cstddef>
#include <vector>

#include "radfabric/raster/grid.hpp"

namespace radfabric::raster {

// Per-channel feature maps of one convolutional layer and the gradients of a
// class score with respect to them.
struct FeatureStack {
  std::vector<RealGrid> activations;
  std::vector<RealGrid> gradients;

  std::size_t channels() const { return activations.size(); }
  // Throws invalid-input on shape mismatch or non-finite entries.
  void validate() const;
};

// Channel weights are the spatial means of each gradient map; the raw map is
// the ReLU of the weighted activation sum, resampled to the output size and
// max-normalized (all-zero when nothing is positive).
Heatmap gradcam(const FeatureStack& stack, std::size_t out_width,
                std::size_t out_height);

// Raw (pre-resampling, pre-normalization) map; exposed for diagnostics.
RealGrid gradcam_raw(const FeatureStack& stack);

}  // namespace radfabric::raster
