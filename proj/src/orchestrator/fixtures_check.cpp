#include "radfabric/orchestrator/fixtures_check.hpp"

#include <algorithm>

#include "radfabric/agents/backends.hpp"
#include "radfabric/orchestrator/study_record.hpp"
#include "radfabric/raster/grid_io.hpp"

namespace radfabric::orchestrator {

namespace fs = std::filesystem;

namespace {

void check_finding_file(const fs::path& file, const std::string& study_id,
                        const PipelineConfig& config, FixtureReport& rep) {
  const std::string text = raster::read_text_file(file);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    rep.issues.push_back({file, "not valid JSON"});
    return;
  }
  agents::AgentFindingSet f;
  try {
    f = agents::finding_set_from_json(j);
  } catch (const std::exception& e) {
    rep.issues.push_back({file, e.what()});
    return;
  }
  if (agents::serialize(f) != text) {
    rep.issues.push_back({file, "not in canonical serialization"});
  }
  if (f.study_id != study_id) {
    rep.issues.push_back({file, "study_id '" + f.study_id + "' does not match directory"});
  }
  const std::string expected = "agent" + std::to_string(f.agent_id) + ".json";
  if (file.filename() != expected) {
    rep.issues.push_back({file, "agent_id " + std::to_string(f.agent_id) + " belongs in " + expected});
  }
  const auto* spec = agents::find_agent(config.agents, f.agent_id);
  if (!spec) {
    rep.issues.push_back({file, "agent " + std::to_string(f.agent_id) + " is not configured"});
  } else {
    try {
      agents::check_against_spec(f, *spec, ErrorKind::kInvalidInput);
    } catch (const std::exception& e) {
      rep.issues.push_back({file, e.what()});
    }
  }
  for (const auto& [p, ref] : f.heatmaps) {
    try {
      agents::load_heatmap_ref(ref, file.parent_path());
    } catch (const std::exception& e) {
      rep.issues.push_back({file, std::string(agents::display_name(p)) + " heatmap: " + e.what()});
    }
  }
}

void check_study(const fs::path& dir, const PipelineConfig& config, FixtureReport& rep) {
  ++rep.studies;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  const std::string study_id = dir.filename().string();
  for (const auto& file : files) {
    const std::string name = file.filename().string();
    try {
      if (name.rfind("agent", 0) == 0 && file.extension() == ".json") {
        ++rep.files_checked;
        check_finding_file(file, study_id, config, rep);
      } else if (name.rfind("report_", 0) == 0 && file.extension() == ".txt") {
        ++rep.files_checked;
        const std::string text = raster::read_text_file(file);
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
          rep.issues.push_back({file, "report text is empty"});
        }
      } else if (name == "mask.grid") {
        ++rep.files_checked;
        raster::read_mask(file);
      }
    } catch (const std::exception& e) {
      rep.issues.push_back({file, e.what()});
    }
  }
}

}  // namespace

FixtureReport validate_fixtures(const fs::path& dir, const PipelineConfig& config) {
  if (!fs::is_directory(dir)) fail(ErrorKind::kNotFound, "'" + dir.string() + "' is not a directory");
  FixtureReport rep;
  if (has_manifest(dir)) {
    ++rep.files_checked;
    Manifest m;
    try {
      m = load_manifest(dir);
    } catch (const std::exception& e) {
      rep.issues.push_back({dir / "manifest.json", e.what()});
      return rep;
    }
    for (const auto& s : m.studies) {
      const fs::path study = dir / s.study_id;
      if (!fs::is_directory(study)) {
        rep.issues.push_back({study, "listed in the manifest but missing"});
        continue;
      }
      if (s.mask && !fs::is_regular_file(*s.mask)) {
        rep.issues.push_back({*s.mask, "mask listed in the manifest is missing"});
      }
      check_study(study, config, rep);
    }
    return rep;
  }
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) check_study(d, config, rep);
  return rep;
}

}  // namespace radfabric::orchestrator
