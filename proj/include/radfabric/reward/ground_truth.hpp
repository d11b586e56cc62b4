#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "radfabric/agents/pathology.hpp"

namespace radfabric::reward {

using agents::Pathology;

enum class Label { kAbsent = 0, kPresent = 1, kUncertain = -1, kUnlabeled = 2 };

struct GroundTruth {
  std::string study_id;
  std::map<Pathology, Label> labels;  // evaluation labels only; absent key = unlabeled

  Label at(Pathology p) const;
  // Present or absent; uncertain and unlabeled entries do not count.
  bool is_labeled(Pathology p) const;
};

// Study id -> truth, as read from a CSV whose header is study_id followed by
// label columns (any order, aliases accepted). Cells: 1, 0, -1 or blank;
// "1.0", "0.0" and "-1.0" are accepted too.
using GroundTruthSet = std::map<std::string, GroundTruth>;

GroundTruthSet parse_ground_truth_csv(const std::string& text);
GroundTruthSet load_ground_truth_csv(const std::filesystem::path& path);
std::string format_ground_truth_csv(const GroundTruthSet& set);

}  // namespace radfabric::reward
