#include "radfabric/orchestrator/study_record.hpp"

#include <algorithm>

#include "radfabric/error.hpp"
#include "radfabric/raster/grid_io.hpp"

namespace radfabric::orchestrator {

namespace fs = std::filesystem;

bool has_manifest(const fs::path& dir) { return fs::is_regular_file(dir / "manifest.json"); }

Manifest load_manifest(const fs::path& dataset_dir) {
  const fs::path file = dataset_dir / "manifest.json";
  json j = json::parse(raster::read_text_file(file), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("studies") || !j["studies"].is_array()) {
    fail(ErrorKind::kFormat, "'" + file.string() + "' must be {\"studies\": [...]}");
  }
  Manifest m;
  m.root = dataset_dir;
  for (const auto& s : j["studies"]) {
    StudyInputs in;
    if (s.is_string()) {
      in.study_id = s.get<std::string>();
    } else {
      in.study_id = s.at("study_id").get<std::string>();
      in.image = s.value("image", std::string());
      if (s.contains("mask") && s["mask"].is_string()) in.mask = dataset_dir / s["mask"].get<std::string>();
    }
    if (in.study_id.empty()) fail(ErrorKind::kFormat, "manifest entry without a study id");
    m.studies.push_back(std::move(in));
  }
  return m;
}

const reasoning::DiagnosisVector* StudyRecord::diagnosis() const {
  if (decision == DecisionSource::kTranscript && transcript) return &transcript->answer;
  if (decision == DecisionSource::kFallback && fallback) return &*fallback;
  return nullptr;
}

bool StudyRecord::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

std::string_view decision_name(DecisionSource d) {
  switch (d) {
    case DecisionSource::kTranscript: return "transcript";
    case DecisionSource::kFallback: return "fallback";
    case DecisionSource::kNone: return "none";
  }
  return "none";
}

DecisionSource decision_from(const std::string& s) {
  if (s == "transcript") return DecisionSource::kTranscript;
  if (s == "fallback") return DecisionSource::kFallback;
  if (s == "none") return DecisionSource::kNone;
  fail(ErrorKind::kFormat, "unknown decision source '" + s + "'");
}

json transcript_json(const reasoning::ReasoningTranscript& t) {
  json missing = json::array();
  for (auto p : t.missing_labels) missing.push_back(agents::display_name(p));
  return {{"raw", t.raw}, {"think", t.think}, {"answer", to_json(t.answer)}, {"missing_labels", missing}};
}

reasoning::ReasoningTranscript transcript_from(const json& j) {
  reasoning::ReasoningTranscript t;
  t.raw = j.at("raw").get<std::string>();
  t.think = j.at("think").get<std::string>();
  t.answer = reasoning::diagnosis_from_json(j.at("answer"));
  for (const auto& m : j.value("missing_labels", json::array())) {
    t.missing_labels.push_back(agents::parse_pathology(m.get<std::string>()));
  }
  return t;
}

}  // namespace

json to_json(const StudyRecord& r) {
  json findings = json::array();
  for (const auto& f : r.finding_sets) findings.push_back(agents::to_json(f));
  json anatomy = json::array();
  for (const auto& a : r.anatomy) {
    json e = {{"agent_id", a.agent_id},
              {"pathology", agents::display_name(a.pathology)},
              {"heatmap", a.heatmap_ref},
              {"correlation", anatomy::to_json(a.correlation)}};
    if (a.description) {
      e["description"] = anatomy::to_json(*a.description);
    } else {
      e["note"] = "no focal localization";
    }
    anatomy.push_back(std::move(e));
  }
  json reports = json::array();
  for (const auto& rep : r.reports) reports.push_back(agents::to_json(rep));
  json errors = json::array();
  for (const auto& e : r.errors) errors.push_back({{"stage", e.stage}, {"kind", e.kind}, {"message", e.message}});
  json backends = json::object();
  for (const auto& [id, b] : r.agent_backends) backends[std::to_string(id)] = b;

  std::string reasoner = "none";
  if (r.decision == DecisionSource::kTranscript) reasoner = "remote";
  if (r.decision == DecisionSource::kFallback) reasoner = "fallback";

  json j = {{"study_id", r.study_id},
            {"inputs", r.inputs},
            {"finding_sets", findings},
            {"anatomy", anatomy},
            {"reports", reports},
            {"prompt", r.prompt},
            {"transcript", r.transcript ? transcript_json(*r.transcript) : json(nullptr)},
            {"fallback", r.fallback ? to_json(*r.fallback) : json(nullptr)},
            {"decision", decision_name(r.decision)},
            {"flags", r.flags},
            {"errors", errors},
            {"failed", r.failed},
            {"provenance",
             {{"reasoner", reasoner},
              {"agent_backends", backends},
              {"started_at", r.started_at},
              {"finished_at", r.finished_at},
              {"config_hash", r.config_hash}}}};
  return j;
}

StudyRecord record_from_json(const json& j) {
  try {
    StudyRecord r;
    r.study_id = j.at("study_id").get<std::string>();
    r.inputs = j.value("inputs", json::object());
    for (const auto& f : j.at("finding_sets")) r.finding_sets.push_back(agents::finding_set_from_json(f));
    for (const auto& a : j.value("anatomy", json::array())) {
      AnatomyEntry e;
      e.agent_id = a.at("agent_id").get<int>();
      e.pathology = agents::parse_pathology(a.at("pathology").get<std::string>());
      e.heatmap_ref = a.value("heatmap", std::string());
      e.correlation = anatomy::correlation_from_json(a.at("correlation"));
      if (a.contains("description")) e.description = anatomy::description_from_json(a["description"]);
      r.anatomy.push_back(std::move(e));
    }
    for (const auto& rep : j.value("reports", json::array())) r.reports.push_back(agents::report_from_json(rep));
    r.prompt = j.value("prompt", std::string());
    if (j.contains("transcript") && !j["transcript"].is_null()) r.transcript = transcript_from(j["transcript"]);
    if (j.contains("fallback") && !j["fallback"].is_null()) r.fallback = reasoning::diagnosis_from_json(j["fallback"]);
    r.decision = decision_from(j.value("decision", std::string("none")));
    r.flags = j.value("flags", std::vector<std::string>{});
    for (const auto& e : j.value("errors", json::array())) {
      r.errors.push_back({e.value("stage", std::string()), e.value("kind", std::string()),
                          e.value("message", std::string())});
    }
    r.failed = j.value("failed", false);
    const json prov = j.value("provenance", json::object());
    const json backends = prov.value("agent_backends", json::object());
    for (const auto& [id, b] : backends.items()) {
      r.agent_backends[std::stoi(id)] = b.get<std::string>();
    }
    r.started_at = prov.value("started_at", std::string());
    r.finished_at = prov.value("finished_at", std::string());
    r.config_hash = prov.value("config_hash", std::string());
    return r;
  } catch (const json::exception& e) {
    fail(ErrorKind::kFormat, std::string("study record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    fail(ErrorKind::kFormat, std::string("study record: ") + e.what());
  }
}

std::string serialize(const StudyRecord& r) { return to_json(r).dump(2) + "\n"; }

StudyRecord load_record(const fs::path& path) {
  json j = json::parse(raster::read_text_file(path), nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::kFormat, "'" + path.string() + "' is not valid JSON");
  return record_from_json(j);
}

}  // namespace radfabric::orchestrator
