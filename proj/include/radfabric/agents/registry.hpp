#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "radfabric/agents/pathology.hpp"

namespace radfabric::agents {

using json = nlohmann::json;

struct FixtureBackend {
  bool operator==(const FixtureBackend&) const = default;
};

// An MCP tool on another server, reached over TCP at `endpoint` (host:port).
struct RemoteBackend {
  std::string tool;
  std::string endpoint;
  bool operator==(const RemoteBackend&) const = default;
};

// Emits `value` for every covered pathology (CXR agents) or `text` (report
// agents). Used for smoke tests and degraded runs.
struct ConstantBackend {
  double value = 0.0;
  std::string text;
  bool operator==(const ConstantBackend&) const = default;
};

using Backend = std::variant<FixtureBackend, RemoteBackend, ConstantBackend>;

std::string backend_name(const Backend& backend);

enum class AgentKind { kCxr, kReport };

struct AgentSpec {
  int id = 0;
  std::string name;
  std::string dataset;
  AgentKind kind = AgentKind::kCxr;
  std::set<Pathology> coverage;
  Backend backend = FixtureBackend{};

  bool covers(Pathology p) const { return coverage.count(p) > 0; }
  bool operator==(const AgentSpec&) const = default;
};

// Seven CXR agents with the reference coverage matrix, followed by the two
// report agents. CXR agent k has id k; report agents use ids 101 and 102.
std::vector<AgentSpec> default_registry();

// Throws invalid-input on duplicate ids or names, or an empty coverage set.
void validate_registry(const std::vector<AgentSpec>& specs);

const AgentSpec* find_agent(const std::vector<AgentSpec>& specs, int id);

json to_json(const AgentSpec& spec);
// Missing fields fall back to `base` when given (config overrides).
AgentSpec agent_spec_from_json(const json& j, const AgentSpec* base = nullptr);
json backend_to_json(const Backend& backend);
Backend backend_from_json(const json& j);

}  // namespace radfabric::agents
