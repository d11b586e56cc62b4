#include "radfabric/agents/pathology.hpp"

#include <algorithm>
#include <cctype>

#include "radfabric/error.hpp"

namespace radfabric::agents {

namespace {

constexpr std::array<std::string_view, kPathologyCount> kDisplayNames = {
    "Atelectasis",     "Cardiomegaly",
    "Consolidation",   "Edema",
    "Pleural Effusion", "Emphysema",
    "Enlarged Cardiomediastinum", "Fracture",
    "Fibrosis",        "Hernia",
    "Infiltration",    "Lung Lesion",
    "Lung Opacity",    "Mass",
    "Nodule",          "No Finding",
    "Pleural Other",   "Pleural Thickening",
    "Pneumonia",       "Pneumothorax",
    "Support Devices",
};

struct Alias {
  std::string_view key;  // already folded
  Pathology pathology;
};

constexpr std::array<Alias, 3> kAliases = {{
    {"effusion", Pathology::kPleuralEffusion},
    {"infiltrate", Pathology::kInfiltration},
    {"nofindings", Pathology::kNoFinding},
}};

std::string fold(std::string_view label) {
  std::string out;
  out.reserve(label.size());
  for (char c : label) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) out.push_back(static_cast<char>(std::tolower(u)));
  }
  return out;
}

}  // namespace

bool is_eval_label(Pathology p) {
  return std::find(kEvalLabels.begin(), kEvalLabels.end(), p) != kEvalLabels.end();
}

std::string_view display_name(Pathology p) {
  return kDisplayNames[static_cast<std::size_t>(p)];
}

std::optional<Pathology> try_parse_pathology(std::string_view label) {
  const std::string key = fold(label);
  if (key.empty()) return std::nullopt;
  for (Pathology p : kAllPathologies) {
    if (fold(display_name(p)) == key) return p;
  }
  for (const auto& alias : kAliases) {
    if (alias.key == key) return alias.pathology;
  }
  return std::nullopt;
}

Pathology parse_pathology(std::string_view label) {
  if (auto p = try_parse_pathology(label)) return *p;
  invalid_input("unknown pathology label '" + std::string(label) + "'");
}

}  // namespace radfabric::agents
