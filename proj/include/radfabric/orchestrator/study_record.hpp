#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radfabric/anatomy/describe.hpp"
#include "radfabric/reasoning/diagnosis.hpp"
#include "radfabric/reasoning/transcript.hpp"

namespace radfabric::orchestrator {

using json = nlohmann::json;

struct StudyInputs {
  std::string study_id;
  std::string image;                         // passed through to remote agents
  std::optional<std::filesystem::path> mask;  // anatomy is skipped without one
};

// manifest.json: {"studies": [{"study_id", "image"?, "mask"?}, ...]}, paths
// relative to the manifest's directory.
struct Manifest {
  std::filesystem::path root;
  std::vector<StudyInputs> studies;
};

Manifest load_manifest(const std::filesystem::path& dataset_dir);
bool has_manifest(const std::filesystem::path& dir);

// One heatmap carried through the anatomical stage. `description` is empty
// when the heatmap never reaches tau.
struct AnatomyEntry {
  int agent_id = 0;
  agents::Pathology pathology{};
  std::string heatmap_ref;
  anatomy::SpatialCorrelation correlation;
  std::optional<anatomy::AnatomicalDescription> description;
};

struct StageError {
  std::string stage;
  std::string kind;
  std::string message;
};

enum class DecisionSource { kNone, kTranscript, kFallback };

struct StudyRecord {
  std::string study_id;
  json inputs = json::object();
  std::vector<agents::AgentFindingSet> finding_sets;
  std::vector<AnatomyEntry> anatomy;
  std::vector<agents::ClinicalReport> reports;
  std::string prompt;
  std::optional<reasoning::ReasoningTranscript> transcript;
  std::optional<reasoning::DiagnosisVector> fallback;
  DecisionSource decision = DecisionSource::kNone;
  std::vector<std::string> flags;  // e.g. "no-anatomy"
  std::vector<StageError> errors;
  bool failed = false;
  std::map<int, std::string> agent_backends;
  std::string started_at;
  std::string finished_at;
  std::string config_hash;

  // The vector chosen as the decision, or nullptr.
  const reasoning::DiagnosisVector* diagnosis() const;
  bool has_flag(const std::string& f) const;
};

json to_json(const StudyRecord& r);
StudyRecord record_from_json(const json& j);
// Pretty-printed, trailing newline.
std::string serialize(const StudyRecord& r);
StudyRecord load_record(const std::filesystem::path& path);

}  // namespace radfabric::orchestrator
