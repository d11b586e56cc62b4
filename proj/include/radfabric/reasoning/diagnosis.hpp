#pragma once

#include <map>
#include <string_view>

#include "json.hpp"
#include "radfabric/agents/pathology.hpp"
#include "radfabric/reasoning/evidence.hpp"

namespace radfabric::reasoning {

enum class Confidence { kHigh, kMedium, kLow };

std::string_view to_string(Confidence c);
Confidence confidence_from_string(std::string_view s);

// Probabilities over the fourteen evaluation labels. Confidence levels are
// optional (parsed transcripts carry none).
struct DiagnosisVector {
  std::map<Pathology, double> probabilities;
  std::map<Pathology, Confidence> confidence;

  double at(Pathology p) const;
  // Throws invalid-input unless exactly the fourteen labels are present with
  // values in [0,1].
  void validate() const;
  bool operator==(const DiagnosisVector&) const = default;
};

json to_json(const DiagnosisVector& v);
DiagnosisVector diagnosis_from_json(const json& j);

inline constexpr double kMentionAdjustment = 0.1;

// Deterministic stand-in for a remote reasoning model:
//  - probability = mean of the covering agents' scores (0 when uncovered),
//    +0.1 for net-positive report mentions, -0.1 for net-negative, clamped;
//  - confidence = high with >= 3 covering agents and no contradiction, low on
//    a contradiction or no coverage, medium otherwise;
//  - No Finding = 1 - max of the other thirteen probabilities.
DiagnosisVector fuse_deterministic(const EvidencePackage& pkg, const ConsistencyReport& consistency);

}  // namespace radfabric::reasoning
