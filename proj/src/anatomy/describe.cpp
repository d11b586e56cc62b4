#include "radfabric/anatomy/describe.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "radfabric/agents/mentions.hpp"

namespace radfabric::anatomy {

namespace {

void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

Region parse_region(const std::string& name) {
  auto r = raster::region_from_name(name);
  if (!r) invalid_input("unknown region name '" + name + "'");
  return *r;
}

}  // namespace

PhraseTables PhraseTables::from_json(const json& j) {
  PhraseTables t;
  t.template_ = j.value("sentence_template",
                        std::string("The {pathology} is localized to the {region}{clause}."));
  const json pathology_phrases = j.value("pathology_phrases", json::object());
  for (const auto& [label, phrase] : pathology_phrases.items()) {
    t.pathology_[agents::parse_pathology(label)] = phrase.get<std::string>();
  }
  const json region_phrases = j.value("region_phrases", json::object());
  for (const auto& [name, phrase] : region_phrases.items()) {
    t.region_[parse_region(name)] = phrase.get<std::string>();
  }
  for (const auto& c : j.value("clauses", json::array())) {
    Clause clause;
    clause.pathology = agents::parse_pathology(c.at("pathology").get<std::string>());
    for (const auto& r : c.at("regions")) clause.regions.push_back(parse_region(r.get<std::string>()));
    clause.text = c.at("text").get<std::string>();
    t.clauses_.push_back(std::move(clause));
  }
  return t;
}

PhraseTables PhraseTables::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kNotFound, "cannot open phrase tables '" + path.string() + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::kFormat, "'" + path.string() + "' is not valid JSON");
  return from_json(j);
}

const PhraseTables& PhraseTables::builtin() {
  static const PhraseTables tables = load(agents::default_data_dir() / "anatomy_phrases.json");
  return tables;
}

std::string PhraseTables::pathology_phrase(Pathology p) const {
  if (auto it = pathology_.find(p); it != pathology_.end()) return it->second;
  std::string s(agents::display_name(p));
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string PhraseTables::region_phrase(Region r) const {
  if (auto it = region_.find(r); it != region_.end()) return it->second;
  return std::string(raster::region_name(r));
}

std::string PhraseTables::clause(Pathology p, Region r) const {
  for (const auto& c : clauses_) {
    if (c.pathology == p && std::find(c.regions.begin(), c.regions.end(), r) != c.regions.end()) {
      return c.text;
    }
  }
  return "";
}

AnatomicalDescription describe(Pathology pathology, const SpatialCorrelation& c,
                               const PhraseTables& tables) {
  if (!c.has_activation()) {
    invalid_input(std::string("heatmap has no activation at tau ") + std::to_string(c.tau) +
                  "; report " + kNoFocalLocalization);
  }
  AnatomicalDescription d;
  d.pathology = pathology;
  d.correlation = c;
  d.region_phrase = tables.region_phrase(c.dominant);
  d.sentence = tables.sentence_template();
  replace_all(d.sentence, "{pathology}", tables.pathology_phrase(pathology));
  replace_all(d.sentence, "{region}", d.region_phrase);
  replace_all(d.sentence, "{clause}", tables.clause(pathology, c.dominant));
  return d;
}

AnatomicalDescription describe(Pathology pathology, const SpatialCorrelation& c) {
  return describe(pathology, c, PhraseTables::builtin());
}

json to_json(const AnatomicalDescription& d) {
  return {{"pathology", agents::display_name(d.pathology)},
          {"agent_id", d.agent_id},
          {"heatmap", d.heatmap_ref},
          {"region_phrase", d.region_phrase},
          {"sentence", d.sentence},
          {"correlation", to_json(d.correlation)}};
}

AnatomicalDescription description_from_json(const json& j) {
  AnatomicalDescription d;
  d.pathology = agents::parse_pathology(j.at("pathology").get<std::string>());
  d.agent_id = j.value("agent_id", 0);
  d.heatmap_ref = j.value("heatmap", std::string());
  d.region_phrase = j.at("region_phrase").get<std::string>();
  d.sentence = j.at("sentence").get<std::string>();
  d.correlation = correlation_from_json(j.at("correlation"));
  return d;
}

}  // namespace radfabric::anatomy
