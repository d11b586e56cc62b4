#include "radfabric/agents/findings.hpp"

#include "radfabric/error.hpp"

namespace radfabric::agents {

void check_against_spec(const AgentFindingSet& findings, const AgentSpec& spec,
                        ErrorKind kind) {
  const std::string who = "agent " + std::to_string(spec.id) + " (" + spec.name + ")";
  if (findings.agent_id != spec.id) {
    fail(kind, who + ": finding set is tagged agent " + std::to_string(findings.agent_id));
  }
  for (const auto& [p, score] : findings.scores) {
    if (!spec.covers(p)) {
      fail(kind, who + " reported " + std::string(display_name(p)) +
                     ", which is outside its coverage");
    }
    if (!(score >= 0.0 && score <= 1.0)) {
      fail(kind, who + " reported " + std::string(display_name(p)) +
                     " score outside [0,1]");
    }
  }
  for (const auto& [p, ref] : findings.heatmaps) {
    if (!spec.covers(p)) {
      fail(kind, who + " sent a heatmap for uncovered pathology " +
                     std::string(display_name(p)));
    }
    if (ref.empty()) fail(kind, who + " sent an empty heatmap reference");
  }
}

json to_json(const AgentFindingSet& f) {
  json scores = json::object();
  for (const auto& [p, s] : f.scores) scores[std::string(display_name(p))] = s;
  json heatmaps = json::object();
  for (const auto& [p, ref] : f.heatmaps) heatmaps[std::string(display_name(p))] = ref;
  return {{"agent_id", f.agent_id},
          {"study_id", f.study_id},
          {"scores", std::move(scores)},
          {"heatmaps", std::move(heatmaps)}};
}

AgentFindingSet finding_set_from_json(const json& j) {
  if (!j.is_object()) invalid_input("finding set must be a JSON object");
  AgentFindingSet f;
  f.agent_id = j.at("agent_id").get<int>();
  f.study_id = j.at("study_id").get<std::string>();
  const json scores = j.value("scores", json::object());
  for (const auto& [label, score] : scores.items()) {
    if (!score.is_number()) invalid_input("score for '" + label + "' is not a number");
    const Pathology p = parse_pathology(label);
    if (!f.scores.emplace(p, score.get<double>()).second) {
      invalid_input("duplicate score for '" + label + "'");
    }
  }
  const json heatmaps = j.value("heatmaps", json::object());
  for (const auto& [label, ref] : heatmaps.items()) {
    if (!ref.is_string()) invalid_input("heatmap reference for '" + label + "' must be a string");
    f.heatmaps[parse_pathology(label)] = ref.get<std::string>();
  }
  return f;
}

std::string serialize(const AgentFindingSet& f) { return to_json(f).dump(2) + "\n"; }

std::string_view to_string(Polarity p) {
  switch (p) {
    case Polarity::kPositive: return "positive";
    case Polarity::kNegative: return "negative";
    case Polarity::kUncertain: return "uncertain";
  }
  return "positive";
}

Polarity polarity_from_string(std::string_view s) {
  if (s == "positive") return Polarity::kPositive;
  if (s == "negative") return Polarity::kNegative;
  if (s == "uncertain") return Polarity::kUncertain;
  invalid_input("unknown polarity '" + std::string(s) + "'");
}

json to_json(const ClinicalReport& r) {
  json mentions = json::array();
  for (const auto& m : r.mentions) {
    mentions.push_back({{"pathology", display_name(m.pathology)},
                        {"polarity", to_string(m.polarity)}});
  }
  return {{"agent_name", r.agent_name},
          {"study_id", r.study_id},
          {"text", r.text},
          {"mentions", std::move(mentions)}};
}

ClinicalReport report_from_json(const json& j) {
  ClinicalReport r;
  r.agent_name = j.at("agent_name").get<std::string>();
  r.study_id = j.at("study_id").get<std::string>();
  r.text = j.at("text").get<std::string>();
  for (const auto& m : j.value("mentions", json::array())) {
    r.mentions.push_back({parse_pathology(m.at("pathology").get<std::string>()),
                          polarity_from_string(m.at("polarity").get<std::string>())});
  }
  return r;
}

}  // namespace radfabric::agents
