#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "radfabric/agents/pathology.hpp"
#include "radfabric/agents/registry.hpp"
#include "radfabric/error.hpp"

namespace radfabric::agents {

using json = nlohmann::json;

// One CXR agent's output for one study. Heatmap references are grid-file
// names relative to the study's fixture directory, absolute paths, or inline
// grid text (anything containing a newline).
struct AgentFindingSet {
  int agent_id = 0;
  std::string study_id;
  std::map<Pathology, double> scores;
  std::map<Pathology, std::string> heatmaps;

  bool operator==(const AgentFindingSet&) const = default;
};

// Throws Error(kind) if any score or heatmap lies outside `spec`'s coverage
// or a score leaves [0,1].
void check_against_spec(const AgentFindingSet& findings, const AgentSpec& spec,
                        ErrorKind kind);

json to_json(const AgentFindingSet& f);
AgentFindingSet finding_set_from_json(const json& j);
// Canonical serialization: two-space indent, sorted keys, trailing newline.
std::string serialize(const AgentFindingSet& f);

enum class Polarity { kPositive, kNegative, kUncertain };

std::string_view to_string(Polarity p);
Polarity polarity_from_string(std::string_view s);

struct Mention {
  Pathology pathology;
  Polarity polarity;
  bool operator==(const Mention&) const = default;
};

struct ClinicalReport {
  std::string agent_name;
  std::string study_id;
  std::string text;
  std::vector<Mention> mentions;

  bool operator==(const ClinicalReport&) const = default;
};

json to_json(const ClinicalReport& r);
ClinicalReport report_from_json(const json& j);

}  // namespace radfabric::agents
