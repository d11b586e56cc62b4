#include "radfabric/agents/backends.hpp"

#include <fstream>

#include "radfabric/error.hpp"
#include "radfabric/mcp/client.hpp"
#include "radfabric/raster/grid_io.hpp"

namespace radfabric::agents {

namespace fs = std::filesystem;

namespace {

std::string describe(const AgentSpec& spec) {
  return "agent " + std::to_string(spec.id) + " (" + spec.name + ")";
}

const Lexicon& lexicon_of(const AgentContext& ctx) {
  return ctx.lexicon ? *ctx.lexicon : Lexicon::builtin();
}

const FixtureStore& fixtures_of(const AgentContext& ctx, const AgentSpec& spec) {
  if (!ctx.fixtures) {
    invalid_input(describe(spec) + " uses the fixture backend but no fixture store is configured");
  }
  return *ctx.fixtures;
}

// Runs a remote tool call, attaching the agent identity to any failure.
json call_remote(const AgentSpec& spec, const RemoteBackend& remote,
                 const std::string& study_id, const std::string& image_ref,
                 const AgentContext& ctx) {
  try {
    auto client = mcp::connect_tcp(remote.endpoint, ctx.remote_timeout);
    return client->call_tool(remote.tool, {{"study_id", study_id}, {"image_ref", image_ref}});
  } catch (const mcp::RpcError& e) {
    fail(ErrorKind::kRemoteFailure, describe(spec) + ": " + e.what());
  } catch (const Error& e) {
    fail(e.kind(), describe(spec) + ": " + e.what());
  }
}

AgentFindingSet parse_remote_findings(const AgentSpec& spec, const std::string& study_id,
                                      const json& result) {
  const auto violation = [&](const std::string& what) {
    fail(ErrorKind::kProtocolViolation, describe(spec) + ": " + what);
  };
  if (!result.is_object() || !result.contains("scores") || !result["scores"].is_object()) {
    violation("response lacks a 'scores' object");
  }
  AgentFindingSet f;
  f.agent_id = spec.id;
  f.study_id = study_id;
  for (const auto& [label, score] : result["scores"].items()) {
    auto p = try_parse_pathology(label);
    if (!p) violation("unknown pathology label '" + label + "'");
    if (!score.is_number()) violation("score for '" + label + "' is not a number");
    f.scores[*p] = score.get<double>();
  }
  if (result.contains("heatmaps")) {
    if (!result["heatmaps"].is_object()) violation("'heatmaps' must be an object");
    for (const auto& [label, ref] : result["heatmaps"].items()) {
      auto p = try_parse_pathology(label);
      if (!p) violation("unknown pathology label '" + label + "'");
      if (!ref.is_string()) violation("heatmap for '" + label + "' must be a string");
      f.heatmaps[*p] = ref.get<std::string>();
    }
  }
  check_against_spec(f, spec, ErrorKind::kProtocolViolation);
  return f;
}

}  // namespace

FixtureStore::FixtureStore(fs::path root) : root_(std::move(root)) {}

fs::path FixtureStore::study_dir(const std::string& study_id) const {
  if (study_id.empty() || study_id.find('/') != std::string::npos || study_id == "..") {
    invalid_input("invalid study id '" + study_id + "'");
  }
  return root_ / study_id;
}

bool FixtureStore::has_finding_set(int agent_id, const std::string& study_id) const {
  return fs::exists(study_dir(study_id) / ("agent" + std::to_string(agent_id) + ".json"));
}

AgentFindingSet FixtureStore::load_finding_set(int agent_id, const std::string& study_id) const {
  const fs::path path = study_dir(study_id) / ("agent" + std::to_string(agent_id) + ".json");
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::kNotFound, "no fixture for agent " + std::to_string(agent_id) +
                                   " and study '" + study_id + "' (" + path.string() + ")");
  }
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) invalid_input(path.string() + " is not valid JSON");
  AgentFindingSet f = finding_set_from_json(j);
  if (f.study_id != study_id) {
    invalid_input(path.string() + " is tagged study '" + f.study_id + "'");
  }
  return f;
}

std::string FixtureStore::load_report_text(const std::string& agent_name,
                                           const std::string& study_id) const {
  const fs::path path = study_dir(study_id) / ("report_" + agent_name + ".txt");
  if (!fs::exists(path)) {
    fail(ErrorKind::kNotFound, "no report fixture for agent '" + agent_name +
                                   "' and study '" + study_id + "' (" + path.string() + ")");
  }
  return raster::read_text_file(path);
}

raster::Heatmap load_heatmap_ref(const std::string& ref, const fs::path& base_dir) {
  if (ref.find('\n') != std::string::npos) {
    return raster::Heatmap(raster::parse_real_grid(ref));
  }
  const fs::path path(ref);
  return raster::read_heatmap(path.is_absolute() ? path : base_dir / path);
}

AgentFindingSet run_cxr_agent(const AgentSpec& spec, const std::string& study_id,
                              const std::string& image_ref, const AgentContext& ctx) {
  if (spec.kind != AgentKind::kCxr) invalid_input(describe(spec) + " is not a CXR agent");
  if (study_id.empty()) invalid_input("study id must be nonempty");

  if (std::holds_alternative<FixtureBackend>(spec.backend)) {
    AgentFindingSet f = fixtures_of(ctx, spec).load_finding_set(spec.id, study_id);
    check_against_spec(f, spec, ErrorKind::kInvalidInput);
    return f;
  }
  if (const auto* c = std::get_if<ConstantBackend>(&spec.backend)) {
    if (!(c->value >= 0.0 && c->value <= 1.0)) {
      invalid_input(describe(spec) + ": constant value outside [0,1]");
    }
    AgentFindingSet f;
    f.agent_id = spec.id;
    f.study_id = study_id;
    for (Pathology p : spec.coverage) f.scores[p] = c->value;
    return f;
  }
  const auto& remote = std::get<RemoteBackend>(spec.backend);
  return parse_remote_findings(spec, study_id,
                               call_remote(spec, remote, study_id, image_ref, ctx));
}

ClinicalReport run_report_agent(const AgentSpec& spec, const std::string& study_id,
                                const std::string& image_ref, const AgentContext& ctx) {
  if (spec.kind != AgentKind::kReport) invalid_input(describe(spec) + " is not a report agent");
  if (study_id.empty()) invalid_input("study id must be nonempty");

  ClinicalReport report;
  report.agent_name = spec.name;
  report.study_id = study_id;

  if (std::holds_alternative<FixtureBackend>(spec.backend)) {
    report.text = fixtures_of(ctx, spec).load_report_text(spec.name, study_id);
    if (report.text.find_first_not_of(" \t\r\n") == std::string::npos) {
      invalid_input(describe(spec) + ": report fixture for '" + study_id + "' is empty");
    }
  } else if (const auto* c = std::get_if<ConstantBackend>(&spec.backend)) {
    if (c->text.empty()) invalid_input(describe(spec) + ": constant report text is empty");
    report.text = c->text;
  } else {
    const auto& remote = std::get<RemoteBackend>(spec.backend);
    json result = call_remote(spec, remote, study_id, image_ref, ctx);
    if (!result.is_object() || !result.contains("text") || !result["text"].is_string()) {
      fail(ErrorKind::kProtocolViolation, describe(spec) + ": response lacks a 'text' string");
    }
    report.text = result["text"].get<std::string>();
    if (report.text.find_first_not_of(" \t\r\n") == std::string::npos) {
      fail(ErrorKind::kProtocolViolation, describe(spec) + ": remote returned an empty report");
    }
  }
  report.mentions = extract_mentions(report.text, lexicon_of(ctx));
  return report;
}

json agent_tool_schema() {
  return {{"type", "object"},
          {"properties",
           {{"study_id", {{"type", "string"}}}, {"image_ref", {{"type", "string"}}}}},
          {"required", json::array({"study_id"})},
          {"additionalProperties", false}};
}

std::string cxr_tool_name(const AgentSpec& spec) { return "cxr_agent_" + std::to_string(spec.id); }
std::string report_tool_name(const AgentSpec& spec) { return "report_agent_" + spec.name; }

std::vector<mcp::Tool> agent_tools(const std::vector<AgentSpec>& specs, const AgentContext& ctx) {
  std::vector<mcp::Tool> tools;
  for (const auto& spec : specs) {
    mcp::Tool tool;
    tool.spec.input_schema = agent_tool_schema();
    if (spec.kind == AgentKind::kCxr) {
      tool.spec.name = cxr_tool_name(spec);
      tool.spec.description = "CXR agent " + std::to_string(spec.id) + " (" + spec.name + ", " +
                              spec.dataset + "): per-pathology probabilities and heatmaps";
      tool.handler = [spec, ctx](const json& args) {
        const std::string study_id = args.at("study_id").get<std::string>();
        const std::string image_ref = args.value("image_ref", std::string());
        AgentFindingSet f = run_cxr_agent(spec, study_id, image_ref, ctx);
        json scores = json::object();
        for (const auto& [p, s] : f.scores) scores[std::string(display_name(p))] = s;
        json heatmaps = json::object();
        const fs::path base = ctx.fixtures ? ctx.fixtures->study_dir(study_id) : fs::path();
        for (const auto& [p, ref] : f.heatmaps) {
          heatmaps[std::string(display_name(p))] =
              raster::format_real_grid(load_heatmap_ref(ref, base).grid());
        }
        return json{{"scores", scores}, {"heatmaps", heatmaps}};
      };
    } else {
      tool.spec.name = report_tool_name(spec);
      tool.spec.description = "Report agent " + spec.name + ": narrative findings report";
      tool.handler = [spec, ctx](const json& args) {
        ClinicalReport r = run_report_agent(spec, args.at("study_id").get<std::string>(),
                                            args.value("image_ref", std::string()), ctx);
        return json{{"text", r.text}};
      };
    }
    tools.push_back(std::move(tool));
  }
  return tools;
}

}  // namespace radfabric::agents
