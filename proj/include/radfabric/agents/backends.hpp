#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "radfabric/agents/findings.hpp"
#include "radfabric/agents/mentions.hpp"
#include "radfabric/agents/registry.hpp"
#include "radfabric/mcp/server.hpp"
#include "radfabric/raster/grid.hpp"

namespace radfabric::agents {

// Read-only view of a fixture tree:
//   <root>/<study_id>/agent<k>.json      finding set of CXR agent k
//   <root>/<study_id>/report_<name>.txt  narrative of report agent <name>
//   <root>/<study_id>/*.grid             heatmaps and masks
class FixtureStore {
 public:
  explicit FixtureStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path study_dir(const std::string& study_id) const;

  bool has_finding_set(int agent_id, const std::string& study_id) const;
  // Throws Error(kNotFound) naming agent and study.
  AgentFindingSet load_finding_set(int agent_id, const std::string& study_id) const;
  std::string load_report_text(const std::string& agent_name,
                               const std::string& study_id) const;

 private:
  std::filesystem::path root_;
};

// Resolves a heatmap reference from a finding set: inline grid text,
// absolute path, or a path relative to `base_dir`.
raster::Heatmap load_heatmap_ref(const std::string& ref,
                                 const std::filesystem::path& base_dir);

struct AgentContext {
  const FixtureStore* fixtures = nullptr;
  const Lexicon* lexicon = nullptr;  // builtin lexicon when null
  std::chrono::milliseconds remote_timeout{30'000};
};

AgentFindingSet run_cxr_agent(const AgentSpec& spec, const std::string& study_id,
                              const std::string& image_ref, const AgentContext& ctx);

ClinicalReport run_report_agent(const AgentSpec& spec, const std::string& study_id,
                                const std::string& image_ref, const AgentContext& ctx);

// Input schema shared by every agent tool: {study_id, image_ref?}.
json agent_tool_schema();

// Wraps each spec as an MCP tool ("cxr_agent_<id>" / "report_agent_<name>")
// answering with the remote-backend contract. Heatmaps are sent inline.
std::vector<mcp::Tool> agent_tools(const std::vector<AgentSpec>& specs,
                                   const AgentContext& ctx);

std::string cxr_tool_name(const AgentSpec& spec);
std::string report_tool_name(const AgentSpec& spec);

}  // namespace radfabric::agents
