#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "radfabric/agents/pathology.hpp"
#include "radfabric/anatomy/correlate.hpp"

namespace radfabric::anatomy {

using agents::Pathology;

// Sentence grammar and phrase tables (data/anatomy_phrases.json).
class PhraseTables {
 public:
  struct Clause {
    Pathology pathology;
    std::vector<Region> regions;
    std::string text;
  };

  static PhraseTables from_json(const json& j);
  static PhraseTables load(const std::filesystem::path& path);
  static const PhraseTables& builtin();

  // Falls back to the lowercased display label.
  std::string pathology_phrase(Pathology p) const;
  std::string region_phrase(Region r) const;
  // Clause appended after the region phrase, or "".
  std::string clause(Pathology p, Region r) const;
  const std::string& sentence_template() const { return template_; }

 private:
  std::string template_;
  std::map<Pathology, std::string> pathology_;
  std::map<Region, std::string> region_;
  std::vector<Clause> clauses_;
};

struct AnatomicalDescription {
  Pathology pathology;
  int agent_id = 0;
  std::string heatmap_ref;
  std::string region_phrase;
  std::string sentence;
  SpatialCorrelation correlation;

  bool operator==(const AnatomicalDescription&) const = default;
};

// Renders "The {pathology} is localized to the {region}{clause}." from the
// dominant region. Throws invalid-input for a no-activation correlation;
// callers should report "no focal localization" instead.
AnatomicalDescription describe(Pathology pathology, const SpatialCorrelation& c,
                               const PhraseTables& tables);
AnatomicalDescription describe(Pathology pathology, const SpatialCorrelation& c);

inline constexpr const char* kNoFocalLocalization = "no focal localization";

json to_json(const AnatomicalDescription& d);
AnatomicalDescription description_from_json(const json& j);

}  // namespace radfabric::anatomy
