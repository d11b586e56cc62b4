#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "radfabric/agents/registry.hpp"
#include "radfabric/reasoning/reasoner_client.hpp"
#include "radfabric/reward/reward.hpp"

namespace radfabric::orchestrator {

using json = nlohmann::json;

// One JSON document drives a run. Every key is optional:
//   registry          "default" (seven CXR + two report agents) or "none"
//   disable_agents    ids removed from the registry
//   agents            entries merged by id onto the registry, or appended
//   fixtures          fixture root, relative to the config file
//   out_dir           record directory, relative to the config file
//   tau, delta        anatomy threshold and contradiction spread
//   reward            {format_weight, accuracy_weight, threshold, transcript_format}
//   reasoner          chat-completion endpoint; fusion fallback when absent
//   fallback          use the fallback when the reasoner fails (default true)
//   remote_timeout_ms MCP call timeout for remote agents
struct PipelineConfig {
  std::vector<agents::AgentSpec> agents;
  std::filesystem::path fixtures_root;
  std::filesystem::path out_dir = "out";
  double tau = 0.4;
  double delta = 0.3;
  reward::RewardConfig reward;
  std::optional<reasoning::ReasonerEndpoint> reasoner;
  bool fallback = true;
  bool serial = false;  // command-line only
  std::chrono::milliseconds remote_timeout{30'000};

  std::string source;  // the bytes the config was parsed from
  std::string hash;    // hex SHA-256 of source

  std::vector<const agents::AgentSpec*> cxr_agents() const;
  std::vector<const agents::AgentSpec*> report_agents() const;
};

// base_dir anchors relative paths.
PipelineConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);
// Equivalent to parsing "{}" from the working directory.
PipelineConfig default_config();

std::string sha256_hex(std::string_view bytes);

}  // namespace radfabric::orchestrator
