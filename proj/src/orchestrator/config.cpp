#include "radfabric/orchestrator/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <set>

#include "radfabric/error.hpp"
#include "radfabric/raster/grid_io.hpp"

namespace radfabric::orchestrator {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::kIo, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::vector<const agents::AgentSpec*> PipelineConfig::cxr_agents() const {
  std::vector<const agents::AgentSpec*> out;
  for (const auto& a : agents) {
    if (a.kind == agents::AgentKind::kCxr) out.push_back(&a);
  }
  return out;
}

std::vector<const agents::AgentSpec*> PipelineConfig::report_agents() const {
  std::vector<const agents::AgentSpec*> out;
  for (const auto& a : agents) {
    if (a.kind == agents::AgentKind::kReport) out.push_back(&a);
  }
  return out;
}

PipelineConfig parse_config(const std::string& text, const fs::path& base_dir) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) invalid_input("config is not a JSON object");

  PipelineConfig c;
  c.source = text;
  c.hash = sha256_hex(text);
  try {
    const std::string registry = j.value("registry", std::string("default"));
    if (registry == "default") c.agents = agents::default_registry();
    else if (registry != "none") invalid_input("registry must be \"default\" or \"none\"");

    if (j.contains("disable_agents")) {
      std::set<int> off;
      for (const auto& id : j["disable_agents"]) off.insert(id.get<int>());
      std::erase_if(c.agents, [&](const agents::AgentSpec& a) { return off.count(a.id) > 0; });
    }
    for (const auto& entry : j.value("agents", json::array())) {
      if (!entry.contains("id")) invalid_input("agent entries need an id");
      const int id = entry["id"].get<int>();
      auto it = std::find_if(c.agents.begin(), c.agents.end(),
                             [&](const agents::AgentSpec& a) { return a.id == id; });
      if (it != c.agents.end()) *it = agents::agent_spec_from_json(entry, &*it);
      else c.agents.push_back(agents::agent_spec_from_json(entry));
    }
    std::sort(c.agents.begin(), c.agents.end(),
              [](const agents::AgentSpec& a, const agents::AgentSpec& b) { return a.id < b.id; });
    agents::validate_registry(c.agents);

    c.fixtures_root = base_dir / fs::path(j.value("fixtures", std::string(".")));
    c.out_dir = base_dir / fs::path(j.value("out_dir", std::string("out")));
    c.tau = j.value("tau", c.tau);
    if (!(c.tau >= 0.0 && c.tau <= 1.0)) invalid_input("tau must lie in [0,1]");
    c.delta = j.value("delta", c.delta);
    if (!(c.delta > 0.0 && c.delta <= 1.0)) invalid_input("delta must lie in (0,1]");
    if (j.contains("reward")) c.reward = reward::RewardConfig::from_json(j["reward"]);
    if (j.contains("reasoner") && !j["reasoner"].is_null()) {
      c.reasoner = reasoning::ReasonerEndpoint::from_json(j["reasoner"]);
    }
    c.fallback = j.value("fallback", true);
    c.remote_timeout = std::chrono::milliseconds(j.value("remote_timeout_ms", 30'000L));
  } catch (const json::exception& e) {
    invalid_input(std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const fs::path& path) {
  return parse_config(raster::read_text_file(path), path.parent_path());
}

PipelineConfig default_config() { return parse_config("{}", fs::path(".")); }

}  // namespace radfabric::orchestrator
