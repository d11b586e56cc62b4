#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace radfabric::agents {

// Diagnostic vocabulary: the union of the evaluation labels and the CXR
// agents' coverage rows.
enum class Pathology {
  kAtelectasis,
  kCardiomegaly,
  kConsolidation,
  kEdema,
  kPleuralEffusion,
  kEmphysema,
  kEnlargedCardiomediastinum,
  kFracture,
  kFibrosis,
  kHernia,
  kInfiltration,
  kLungLesion,
  kLungOpacity,
  kMass,
  kNodule,
  kNoFinding,
  kPleuralOther,
  kPleuralThickening,
  kPneumonia,
  kPneumothorax,
  kSupportDevices,
};

inline constexpr std::size_t kPathologyCount = 21;

inline constexpr std::array<Pathology, kPathologyCount> kAllPathologies = {
    Pathology::kAtelectasis,    Pathology::kCardiomegaly,
    Pathology::kConsolidation,  Pathology::kEdema,
    Pathology::kPleuralEffusion, Pathology::kEmphysema,
    Pathology::kEnlargedCardiomediastinum, Pathology::kFracture,
    Pathology::kFibrosis,       Pathology::kHernia,
    Pathology::kInfiltration,   Pathology::kLungLesion,
    Pathology::kLungOpacity,    Pathology::kMass,
    Pathology::kNodule,         Pathology::kNoFinding,
    Pathology::kPleuralOther,   Pathology::kPleuralThickening,
    Pathology::kPneumonia,      Pathology::kPneumothorax,
    Pathology::kSupportDevices,
};

// The fourteen evaluation labels, in evaluation-table column order.
inline constexpr std::size_t kEvalLabelCount = 14;
inline constexpr std::array<Pathology, kEvalLabelCount> kEvalLabels = {
    Pathology::kAtelectasis,     Pathology::kCardiomegaly,
    Pathology::kConsolidation,   Pathology::kEdema,
    Pathology::kEnlargedCardiomediastinum, Pathology::kFracture,
    Pathology::kLungLesion,      Pathology::kLungOpacity,
    Pathology::kNoFinding,       Pathology::kPleuralEffusion,
    Pathology::kPleuralOther,    Pathology::kPneumonia,
    Pathology::kPneumothorax,    Pathology::kSupportDevices,
};

bool is_eval_label(Pathology p);

// Canonical display label, e.g. "Pleural Effusion".
std::string_view display_name(Pathology p);

// Case-, space-, underscore- and hyphen-insensitive; accepts the known
// aliases ("Effusion"). Returns nullopt for unknown labels.
std::optional<Pathology> try_parse_pathology(std::string_view label);
// As try_parse_pathology, but throws Error(kInvalidInput) naming the label.
Pathology parse_pathology(std::string_view label);

}  // namespace radfabric::agents
