#pragma once

#include <map>
#include <string>
#include <vector>

#include "radfabric/agents/findings.hpp"
#include "radfabric/anatomy/describe.hpp"

namespace radfabric::reasoning {

using agents::AgentFindingSet;
using agents::ClinicalReport;
using agents::Pathology;
using anatomy::AnatomicalDescription;
using json = nlohmann::json;

inline constexpr double kDefaultDelta = 0.3;

struct EvidencePackage {
  std::string study_id;
  std::vector<AgentFindingSet> finding_sets;  // ascending agent id
  std::vector<AnatomicalDescription> descriptions;
  std::vector<ClinicalReport> reports;
  // Display names for agent ids (used when rendering prompts).
  std::map<int, std::string> agent_names;

  std::string agent_name(int id) const;
};

// Sorts finding sets by agent id. Throws invalid-input on empty findings,
// mixed study ids or a repeated agent id.
EvidencePackage assemble_evidence(std::vector<AgentFindingSet> findings,
                                  std::vector<AnatomicalDescription> descriptions,
                                  std::vector<ClinicalReport> reports,
                                  std::map<int, std::string> agent_names = {});

struct PathologyConsistency {
  Pathology pathology{};
  std::vector<std::pair<int, double>> scores;  // (agent id, score)
  double mean = 0.0;
  double spread = 0.0;  // max - min
  bool contradiction = false;
  int positive_mentions = 0;
  int negative_mentions = 0;
  int uncertain_mentions = 0;
  int report_support = 0;  // sign(positive - negative)

  std::size_t covering_agents() const { return scores.size(); }
};

struct ConsistencyReport {
  double delta = kDefaultDelta;
  std::vector<PathologyConsistency> entries;  // one per pathology, canonical order

  const PathologyConsistency& at(Pathology p) const;
};

// Per-pathology agreement over the agents that scored it. A contradiction is
// a spread above delta between at least two agents. delta must lie in (0,1].
ConsistencyReport cross_validate(const EvidencePackage& pkg, double delta = kDefaultDelta);

json to_json(const ConsistencyReport& c);

}  // namespace radfabric::reasoning
