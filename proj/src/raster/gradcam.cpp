#include "radfabric/raster/gradcam.hpp"

#include <algorithm>
#include <cmath>

namespace radfabric::raster {

void FeatureStack::validate() const {
  if (activations.empty()) invalid_input("feature stack has no channels");
  if (activations.size() != gradients.size()) {
    invalid_input("activation and gradient channel counts differ");
  }
  const std::size_t w = activations.front().width();
  const std::size_t h = activations.front().height();
  if (w == 0 || h == 0) invalid_input("feature maps must be non-empty");
  for (std::size_t k = 0; k < activations.size(); ++k) {
    if (!activations[k].same_shape(w, h) || !gradients[k].same_shape(w, h)) {
      invalid_input("feature stack channel " + std::to_string(k) +
                    " has mismatched shape");
    }
    for (double v : activations[k].cells()) {
      if (!std::isfinite(v)) invalid_input("non-finite activation");
    }
    for (double v : gradients[k].cells()) {
      if (!std::isfinite(v)) invalid_input("non-finite gradient");
    }
  }
}

RealGrid gradcam_raw(const FeatureStack& stack) {
  stack.validate();
  const std::size_t w = stack.activations.front().width();
  const std::size_t h = stack.activations.front().height();
  const double area = static_cast<double>(w * h);

  std::vector<double> weights;
  weights.reserve(stack.channels());
  for (const auto& g : stack.gradients) {
    double sum = 0.0;
    for (double v : g.cells()) sum += v;
    weights.push_back(sum / area);
  }

  RealGrid raw(w, h, 0.0);
  auto out = raw.cells();
  for (std::size_t i = 0; i < out.size(); ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < stack.channels(); ++k) {
      acc += weights[k] * stack.activations[k].cells()[i];
    }
    out[i] = std::max(0.0, acc);
  }
  return raw;
}

Heatmap gradcam(const FeatureStack& stack, std::size_t out_width,
                std::size_t out_height) {
  if (out_width == 0 || out_height == 0) {
    invalid_input("output dimensions must be at least 1");
  }
  return normalize(upsample_bilinear(gradcam_raw(stack), out_width, out_height));
}

}  // namespace radfabric::raster
