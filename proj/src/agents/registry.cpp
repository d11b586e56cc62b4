#include "radfabric/agents/registry.hpp"

#include <algorithm>

#include "radfabric/error.hpp"

namespace radfabric::agents {

namespace {

using P = Pathology;

// Rows of the coverage matrix; columns are agents 1..7.
struct CoverageRow {
  Pathology pathology;
  std::array<bool, 7> agents;
};

constexpr bool X = true;
constexpr bool o = false;

constexpr std::array<CoverageRow, 19> kCoverageMatrix = {{
    {P::kAtelectasis,               {X, X, o, X, X, X, X}},
    {P::kCardiomegaly,              {X, X, o, X, X, X, X}},
    {P::kConsolidation,             {X, X, o, X, X, X, X}},
    {P::kEdema,                     {X, X, o, X, X, X, X}},
    {P::kPleuralEffusion,           {X, X, o, o, X, X, X}},
    {P::kEmphysema,                 {X, o, o, X, X, o, o}},
    {P::kEnlargedCardiomediastinum, {X, X, o, o, o, o, o}},
    {P::kFracture,                  {X, X, o, o, X, o, o}},
    {P::kFibrosis,                  {X, o, o, X, X, o, o}},
    {P::kHernia,                    {X, o, o, X, X, o, o}},
    {P::kInfiltration,              {X, o, o, o, X, o, o}},
    {P::kLungLesion,                {X, X, o, o, o, o, o}},
    {P::kLungOpacity,               {X, X, X, o, o, o, o}},
    {P::kMass,                      {X, o, o, X, X, o, o}},
    {P::kNodule,                    {X, o, o, X, X, o, o}},
    {P::kPleuralOther,              {o, o, o, o, o, o, o}},
    {P::kPleuralThickening,         {X, o, o, X, X, o, o}},
    {P::kPneumonia,                 {X, X, X, X, X, o, o}},
    {P::kPneumothorax,              {X, X, o, X, X, o, o}},
}};

struct CxrAgentRow {
  const char* name;
  const char* dataset;
};

constexpr std::array<CxrAgentRow, 7> kCxrAgents = {{
    {"Torchxrayvision_all", "All Datasets"},
    {"Torchxrayvision_mimic", "MIMIC-CXR"},
    {"Torchxrayvision_rsna", "RSNA Pneumonia Challenge"},
    {"Torchxrayvision_nih", "NIH Chest X-Ray8"},
    {"Torchxrayvision_padchest", "PadChest"},
    {"JFHealthcare", "JFhealthcare"},
    {"Chexpert", "CheXpert"},
}};

std::set<Pathology> all_pathologies() {
  return {kAllPathologies.begin(), kAllPathologies.end()};
}

}  // namespace

std::string backend_name(const Backend& backend) {
  return std::visit(
      [](const auto& b) -> std::string {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, FixtureBackend>) return "fixture";
        else if constexpr (std::is_same_v<T, RemoteBackend>) return "remote";
        else return "constant";
      },
      backend);
}

std::vector<AgentSpec> default_registry() {
  std::vector<AgentSpec> specs;
  for (std::size_t k = 0; k < kCxrAgents.size(); ++k) {
    AgentSpec spec;
    spec.id = static_cast<int>(k + 1);
    spec.name = kCxrAgents[k].name;
    spec.dataset = kCxrAgents[k].dataset;
    for (const auto& row : kCoverageMatrix) {
      if (row.agents[k]) spec.coverage.insert(row.pathology);
    }
    specs.push_back(std::move(spec));
  }

  AgentSpec chexagent;
  chexagent.id = 101;
  chexagent.name = "chexagent";
  chexagent.dataset = "report generation";
  chexagent.kind = AgentKind::kReport;
  chexagent.coverage = all_pathologies();
  specs.push_back(chexagent);

  AgentSpec qwen = chexagent;
  qwen.id = 102;
  qwen.name = "qwen2vl";
  specs.push_back(std::move(qwen));
  return specs;
}

void validate_registry(const std::vector<AgentSpec>& specs) {
  std::set<int> ids;
  std::set<std::string> names;
  for (const auto& s : specs) {
    if (!ids.insert(s.id).second) {
      invalid_input("duplicate agent id " + std::to_string(s.id));
    }
    if (s.name.empty()) invalid_input("agent " + std::to_string(s.id) + " has no name");
    if (!names.insert(s.name).second) invalid_input("duplicate agent name '" + s.name + "'");
    if (s.coverage.empty()) {
      invalid_input("agent " + std::to_string(s.id) + " has empty coverage");
    }
    if (const auto* c = std::get_if<ConstantBackend>(&s.backend)) {
      if (!(c->value >= 0.0 && c->value <= 1.0)) {
        invalid_input("agent " + std::to_string(s.id) + ": constant value outside [0,1]");
      }
    }
  }
}

const AgentSpec* find_agent(const std::vector<AgentSpec>& specs, int id) {
  auto it = std::find_if(specs.begin(), specs.end(),
                         [id](const AgentSpec& s) { return s.id == id; });
  return it == specs.end() ? nullptr : &*it;
}

json backend_to_json(const Backend& backend) {
  return std::visit(
      [](const auto& b) -> json {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, FixtureBackend>) {
          return {{"type", "fixture"}};
        } else if constexpr (std::is_same_v<T, RemoteBackend>) {
          return {{"type", "remote"}, {"tool", b.tool}, {"endpoint", b.endpoint}};
        } else {
          json j = {{"type", "constant"}, {"value", b.value}};
          if (!b.text.empty()) j["text"] = b.text;
          return j;
        }
      },
      backend);
}

Backend backend_from_json(const json& j) {
  if (j.is_string()) return backend_from_json(json{{"type", j}});
  if (!j.is_object()) invalid_input("backend must be an object");
  const std::string type = j.value("type", std::string("fixture"));
  if (type == "fixture") return FixtureBackend{};
  if (type == "remote") {
    RemoteBackend r;
    r.tool = j.value("tool", std::string());
    r.endpoint = j.value("endpoint", std::string());
    if (r.tool.empty() || r.endpoint.empty()) {
      invalid_input("remote backend needs 'tool' and 'endpoint'");
    }
    return r;
  }
  if (type == "constant") {
    ConstantBackend c;
    c.value = j.value("value", 0.0);
    c.text = j.value("text", std::string());
    return c;
  }
  invalid_input("unknown backend type '" + type + "'");
}

json to_json(const AgentSpec& spec) {
  json coverage = json::array();
  for (Pathology p : spec.coverage) coverage.push_back(display_name(p));
  return {{"id", spec.id},
          {"name", spec.name},
          {"dataset", spec.dataset},
          {"kind", spec.kind == AgentKind::kCxr ? "cxr" : "report"},
          {"coverage", coverage},
          {"backend", backend_to_json(spec.backend)}};
}

AgentSpec agent_spec_from_json(const json& j, const AgentSpec* base) {
  if (!j.is_object()) invalid_input("agent entry must be an object");
  AgentSpec spec = base ? *base : AgentSpec{};
  if (j.contains("id")) spec.id = j["id"].get<int>();
  if (j.contains("name")) spec.name = j["name"].get<std::string>();
  if (j.contains("dataset")) spec.dataset = j["dataset"].get<std::string>();
  if (j.contains("kind")) {
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "cxr") spec.kind = AgentKind::kCxr;
    else if (kind == "report") spec.kind = AgentKind::kReport;
    else invalid_input("unknown agent kind '" + kind + "'");
  }
  if (j.contains("coverage")) {
    spec.coverage.clear();
    for (const auto& label : j["coverage"]) {
      spec.coverage.insert(parse_pathology(label.get<std::string>()));
    }
  }
  if (j.contains("extra_coverage")) {
    for (const auto& label : j["extra_coverage"]) {
      spec.coverage.insert(parse_pathology(label.get<std::string>()));
    }
  }
  if (j.contains("backend")) spec.backend = backend_from_json(j["backend"]);
  if (!base && spec.kind == AgentKind::kReport && spec.coverage.empty()) {
    spec.coverage = all_pathologies();
  }
  return spec;
}

}  // namespace radfabric::agents
