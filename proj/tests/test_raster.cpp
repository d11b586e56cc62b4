#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "radfabric/raster/gradcam.hpp"
#include "radfabric/raster/grid_io.hpp"

using namespace radfabric;
using namespace radfabric::raster;

TEST_CASE("corner-aligned upsampling") {
  RealGrid g(2, 2, std::vector<double>{0, 1, 1, 0});
  auto up = upsample_bilinear(g, 3, 3);
  CHECK(up.at(0, 0) == 0.0);
  CHECK(up.at(2, 0) == 1.0);
  CHECK(up.at(0, 2) == 1.0);
  CHECK(up.at(2, 2) == 0.0);
  CHECK(up.at(1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(up.at(1, 0) == doctest::Approx(0.5).epsilon(1e-15));

  // Same shape is the identity.
  CHECK(upsample_bilinear(g, 2, 2) == g);

  RealGrid constant(3, 2, 0.37);
  const auto stretched = upsample_bilinear(constant, 17, 11);
  for (double v : stretched.cells()) CHECK(v == 0.37);

  // A 1-wide grid stretches its single column.
  RealGrid column(1, 2, std::vector<double>{0.2, 0.6});
  auto wide = upsample_bilinear(column, 4, 3);
  CHECK(wide.at(3, 0) == 0.2);
  CHECK(wide.at(0, 1) == doctest::Approx(0.4));

  CHECK_THROWS_AS(upsample_bilinear(RealGrid(), 3, 3), Error);
  CHECK_THROWS_AS(upsample_bilinear(g, 0, 3), Error);
}

TEST_CASE("upsampling agrees with the weighted-sum formula") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t w = 1 + rng() % 6, h = 1 + rng() % 6;
    RealGrid g(w, h);
    for (double& v : g.cells()) v = u(rng);
    const std::size_t ow = 1 + rng() % 20, oh = 1 + rng() % 20;
    auto mine = upsample_bilinear(g, ow, oh);
    auto ref = oracle::resample(g, ow, oh);
    for (std::size_t i = 0; i < mine.size(); ++i) CHECK(std::abs(mine.cells()[i] - ref.cells()[i]) < 1e-12);
  }
}

TEST_CASE("normalize and threshold") {
  RealGrid raw(3, 1, std::vector<double>{-2, 1, 4});
  auto h = normalize(raw);
  CHECK(h.at(0, 0) == 0.0);
  CHECK(h.at(1, 0) == 0.25);
  CHECK(h.at(2, 0) == 1.0);

  auto zero = normalize(RealGrid(2, 2, -1.0));
  for (double v : zero.cells()) CHECK(v == 0.0);

  auto mask = threshold(h, 0.25);
  CHECK(mask.at(0, 0) == 0);
  CHECK(mask.at(1, 0) == 1);  // tau is inclusive
  CHECK(mask.at(2, 0) == 1);
  CHECK_THROWS_AS(threshold(h, 1.5), Error);
  CHECK_THROWS_AS(Heatmap(RealGrid(1, 1, 1.2)), Error);
}

TEST_CASE("gradcam matches a brute-force reference") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t c = 1 + rng() % 5, w = 2 + rng() % 5, h = 2 + rng() % 5;
    auto stack = oracle::random_stack(rng, c, w, h);
    const std::size_t ow = w + rng() % 12, oh = h + rng() % 12;
    auto mine = gradcam(stack, ow, oh);
    auto ref = oracle::gradcam(stack, ow, oh);
    REQUIRE(mine.width() == ow);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(mine.cells()[i] - ref.cells()[i]) < 1e-12);
  }
}

TEST_CASE("gradcam with zero or negative evidence is all zero") {
  std::mt19937_64 rng(9);
  auto stack = oracle::random_stack(rng, 3, 4, 4);
  for (auto& g : stack.gradients) g = RealGrid(4, 4, 0.0);
  const auto flat = gradcam(stack, 8, 8);
  for (double v : flat.cells()) CHECK(v == 0.0);

  // Positive activations with uniformly negative gradients: ReLU kills everything.
  for (auto& g : stack.gradients) g = RealGrid(4, 4, -1.0);
  const auto killed = gradcam(stack, 8, 8);
  for (double v : killed.cells()) CHECK(v == 0.0);
}

TEST_CASE("gradcam rejects malformed stacks") {
  FeatureStack empty;
  CHECK_THROWS_AS(gradcam(empty, 4, 4), Error);

  std::mt19937_64 rng(1);
  auto stack = oracle::random_stack(rng, 2, 3, 3);
  stack.gradients.pop_back();
  CHECK_THROWS_AS(gradcam(stack, 4, 4), Error);

  stack = oracle::random_stack(rng, 2, 3, 3);
  stack.gradients[1] = RealGrid(2, 3, 0.0);
  CHECK_THROWS_AS(gradcam(stack, 4, 4), Error);

  stack = oracle::random_stack(rng, 1, 3, 3);
  stack.activations[0].at(1, 1) = std::nan("");
  CHECK_THROWS_AS(gradcam(stack, 4, 4), Error);
}

TEST_CASE("grid files round-trip") {
  RealGrid g(3, 2, std::vector<double>{0.1, 0.2, 0.30000000000000004, 1, 0, 1e-17});
  CHECK(parse_real_grid(format_real_grid(g)) == g);

  SegmentationMask m(2, 2, std::vector<Region>{Region::kLeftLung, Region::kRightLower,
                                               Region::kBackground, Region::kDiaphragm});
  CHECK(parse_mask(format_mask(m)) == m);

  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(0.8503) == "0.8503");
  CHECK(format_real(1.0) == "1");

  CHECK_THROWS_AS(parse_real_grid("2 2\n1 2\n3"), Error);
  CHECK_THROWS_AS(parse_mask("1 1\n11\n"), Error);
  CHECK_THROWS_AS(parse_mask("1 1\nx\n"), Error);

  const auto dir = std::filesystem::temp_directory_path() / "radfabric_raster_test";
  std::filesystem::create_directories(dir);
  write_real_grid(dir / "h.grid", g);
  CHECK(read_heatmap(dir / "h.grid").grid() == g);
  write_mask(dir / "m.grid", m);
  CHECK(read_mask(dir / "m.grid") == m);
  CHECK_THROWS_AS(read_mask(dir / "missing.grid"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("region names") {
  CHECK(region_name(Region::kLeftLower) == "LeftLower");
  CHECK(region_from_name("RightUpper") == Region::kRightUpper);
  CHECK(region_from_code(10) == Region::kRightLower);
  CHECK_FALSE(region_from_code(11).has_value());
  CHECK(is_left_lung(Region::kLeftMiddle));
  CHECK_FALSE(is_left_lung(Region::kRightLung));
  CHECK(is_refined(Region::kRightUpper));
  CHECK_FALSE(is_refined(Region::kRightLung));
}
