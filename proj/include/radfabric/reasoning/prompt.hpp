#pragma once

#include <string>

#include "radfabric/reasoning/evidence.hpp"
#include "radfabric/reasoning/transcript.hpp"

namespace radfabric::reasoning {

// Renders the evidence package as a single user message. Output depends only
// on the package, the consistency report and the delimiters.
std::string build_prompt(const EvidencePackage& pkg, const ConsistencyReport& consistency,
                         const TranscriptFormat& format = kDefaultFormat);

}  // namespace radfabric::reasoning
