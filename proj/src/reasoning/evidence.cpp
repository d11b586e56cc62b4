#include "radfabric/reasoning/evidence.hpp"

#include <algorithm>
#include <set>

namespace radfabric::reasoning {

std::string EvidencePackage::agent_name(int id) const {
  if (auto it = agent_names.find(id); it != agent_names.end()) return it->second;
  return "Agent " + std::to_string(id);
}

EvidencePackage assemble_evidence(std::vector<AgentFindingSet> findings,
                                  std::vector<AnatomicalDescription> descriptions,
                                  std::vector<ClinicalReport> reports,
                                  std::map<int, std::string> agent_names) {
  if (findings.empty()) invalid_input("evidence package needs at least one finding set");
  EvidencePackage pkg;
  pkg.study_id = findings.front().study_id;
  std::set<int> seen;
  for (const auto& f : findings) {
    if (f.study_id != pkg.study_id) {
      invalid_input("finding sets mix studies '" + pkg.study_id + "' and '" + f.study_id + "'");
    }
    if (!seen.insert(f.agent_id).second) {
      invalid_input("agent " + std::to_string(f.agent_id) + " appears twice in study '" +
                    pkg.study_id + "'");
    }
  }
  for (const auto& r : reports) {
    if (r.study_id != pkg.study_id) {
      invalid_input("report from '" + r.agent_name + "' belongs to study '" + r.study_id + "'");
    }
  }
  std::sort(findings.begin(), findings.end(),
            [](const AgentFindingSet& a, const AgentFindingSet& b) { return a.agent_id < b.agent_id; });
  std::stable_sort(descriptions.begin(), descriptions.end(),
                   [](const AnatomicalDescription& a, const AnatomicalDescription& b) {
                     if (a.agent_id != b.agent_id) return a.agent_id < b.agent_id;
                     return a.pathology < b.pathology;
                   });
  std::stable_sort(reports.begin(), reports.end(),
                   [](const ClinicalReport& a, const ClinicalReport& b) {
                     return a.agent_name < b.agent_name;
                   });
  pkg.finding_sets = std::move(findings);
  pkg.descriptions = std::move(descriptions);
  pkg.reports = std::move(reports);
  pkg.agent_names = std::move(agent_names);
  return pkg;
}

const PathologyConsistency& ConsistencyReport::at(Pathology p) const {
  for (const auto& e : entries) {
    if (e.pathology == p) return e;
  }
  invalid_input("no consistency entry for " + std::string(agents::display_name(p)));
}

ConsistencyReport cross_validate(const EvidencePackage& pkg, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) invalid_input("delta must lie in (0,1]");
  ConsistencyReport report;
  report.delta = delta;
  for (Pathology p : agents::kAllPathologies) {
    PathologyConsistency e;
    e.pathology = p;
    for (const auto& f : pkg.finding_sets) {
      if (auto it = f.scores.find(p); it != f.scores.end()) e.scores.emplace_back(f.agent_id, it->second);
    }
    if (!e.scores.empty()) {
      double sum = 0.0;
      double lo = e.scores.front().second;
      double hi = lo;
      for (const auto& [id, s] : e.scores) {
        sum += s;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      e.mean = sum / static_cast<double>(e.scores.size());
      e.spread = hi - lo;
      e.contradiction = e.scores.size() >= 2 && e.spread > delta;
    }
    for (const auto& r : pkg.reports) {
      for (const auto& m : r.mentions) {
        if (m.pathology != p) continue;
        switch (m.polarity) {
          case agents::Polarity::kPositive: ++e.positive_mentions; break;
          case agents::Polarity::kNegative: ++e.negative_mentions; break;
          case agents::Polarity::kUncertain: ++e.uncertain_mentions; break;
        }
      }
    }
    const int net = e.positive_mentions - e.negative_mentions;
    e.report_support = (net > 0) - (net < 0);
    report.entries.push_back(std::move(e));
  }
  return report;
}

json to_json(const ConsistencyReport& c) {
  json entries = json::array();
  for (const auto& e : c.entries) {
    json scores = json::array();
    for (const auto& [id, s] : e.scores) scores.push_back({{"agent_id", id}, {"score", s}});
    entries.push_back({{"pathology", agents::display_name(e.pathology)},
                       {"covering_agents", e.covering_agents()},
                       {"scores", scores},
                       {"mean", e.mean},
                       {"spread", e.spread},
                       {"contradiction", e.contradiction},
                       {"positive_mentions", e.positive_mentions},
                       {"negative_mentions", e.negative_mentions},
                       {"uncertain_mentions", e.uncertain_mentions},
                       {"report_support", e.report_support}});
  }
  return {{"delta", c.delta}, {"entries", entries}};
}

}  // namespace radfabric::reasoning
