#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "radfabric/raster/grid.hpp"

// Plain-text grid files: a header line "W H", then H rows of W
// space-separated values. Heatmaps carry reals, masks carry integer region
// codes (0 Background, 1 Esophagus, 2 LeftLung, 3 RightLung, 4 Diaphragm,
// 5-7 LeftUpper/LeftMiddle/LeftLower, 8-10 RightUpper/RightMiddle/RightLower).
namespace radfabric::raster {

RealGrid parse_real_grid(std::string_view text);
SegmentationMask parse_mask(std::string_view text);

std::string format_real_grid(const RealGrid& grid);
std::string format_mask(const SegmentationMask& mask);

// Heatmap files must already hold values in [0,1].
Heatmap read_heatmap(const std::filesystem::path& path);
SegmentationMask read_mask(const std::filesystem::path& path);
void write_real_grid(const std::filesystem::path& path, const RealGrid& grid);
void write_mask(const std::filesystem::path& path, const SegmentationMask& mask);

// Shortest decimal text that round-trips to the same double.
std::string format_real(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace radfabric::raster
