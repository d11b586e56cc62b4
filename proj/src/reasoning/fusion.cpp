#include <algorithm>

#include "radfabric/reasoning/diagnosis.hpp"

namespace radfabric::reasoning {

std::string_view to_string(Confidence c) {
  switch (c) {
    case Confidence::kHigh: return "high";
    case Confidence::kMedium: return "medium";
    case Confidence::kLow: return "low";
  }
  return "low";
}

Confidence confidence_from_string(std::string_view s) {
  if (s == "high") return Confidence::kHigh;
  if (s == "medium") return Confidence::kMedium;
  if (s == "low") return Confidence::kLow;
  invalid_input("unknown confidence level '" + std::string(s) + "'");
}

double DiagnosisVector::at(Pathology p) const {
  auto it = probabilities.find(p);
  if (it == probabilities.end()) {
    invalid_input("diagnosis vector has no " + std::string(agents::display_name(p)));
  }
  return it->second;
}

void DiagnosisVector::validate() const {
  if (probabilities.size() != agents::kEvalLabelCount) {
    invalid_input("diagnosis vector must hold exactly the fourteen evaluation labels");
  }
  for (const auto& [p, v] : probabilities) {
    if (!agents::is_eval_label(p)) {
      invalid_input(std::string(agents::display_name(p)) + " is not an evaluation label");
    }
    if (!(v >= 0.0 && v <= 1.0)) {
      invalid_input(std::string(agents::display_name(p)) + " probability outside [0,1]");
    }
  }
}

json to_json(const DiagnosisVector& v) {
  json probs = json::object();
  for (const auto& [p, x] : v.probabilities) probs[std::string(agents::display_name(p))] = x;
  json j = {{"probabilities", probs}};
  if (!v.confidence.empty()) {
    json conf = json::object();
    for (const auto& [p, c] : v.confidence) conf[std::string(agents::display_name(p))] = to_string(c);
    j["confidence"] = conf;
  }
  return j;
}

DiagnosisVector diagnosis_from_json(const json& j) {
  DiagnosisVector v;
  for (const auto& [label, x] : j.at("probabilities").items()) {
    v.probabilities[agents::parse_pathology(label)] = x.get<double>();
  }
  if (j.contains("confidence")) {
    for (const auto& [label, c] : j["confidence"].items()) {
      v.confidence[agents::parse_pathology(label)] = confidence_from_string(c.get<std::string>());
    }
  }
  v.validate();
  return v;
}

DiagnosisVector fuse_deterministic(const EvidencePackage& /*pkg*/, const ConsistencyReport& consistency) {
  DiagnosisVector v;
  double peak = 0.0;
  for (Pathology p : agents::kEvalLabels) {
    const auto& e = consistency.at(p);
    double prob = e.covering_agents() == 0 ? 0.0 : e.mean;
    prob += kMentionAdjustment * e.report_support;
    prob = std::clamp(prob, 0.0, 1.0);

    Confidence conf = Confidence::kMedium;
    if (e.contradiction || e.covering_agents() == 0) conf = Confidence::kLow;
    else if (e.covering_agents() >= 3) conf = Confidence::kHigh;

    v.probabilities[p] = prob;
    v.confidence[p] = conf;
    if (p != Pathology::kNoFinding) peak = std::max(peak, prob);
  }
  v.probabilities[Pathology::kNoFinding] = 1.0 - peak;
  return v;
}

}  // namespace radfabric::reasoning
