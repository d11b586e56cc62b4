#pragma once

#include <string>
#include <vector>

#include "radfabric/reasoning/diagnosis.hpp"

namespace radfabric::reasoning {

// Delimiters of the think-then-answer convention. The answer box wraps a
// JSON object: "\boxed{" + {...} + "}" by default.
struct TranscriptFormat {
  std::string think_open = "<think>";
  std::string think_close = "</think>";
  std::string box_open = "\\boxed{";
  std::string box_close = "}";

  static TranscriptFormat from_json(const json& j);
  json to_json() const;
};

inline const TranscriptFormat kDefaultFormat{};

struct ReasoningTranscript {
  std::string raw;
  std::string think;
  DiagnosisVector answer;
  std::vector<Pathology> missing_labels;  // filled with 0 by the parser

  // Compares the parsed content; raw text is not part of identity.
  bool operator==(const ReasoningTranscript& o) const {
    return think == o.think && answer == o.answer && missing_labels == o.missing_labels;
  }
};

// Rules, in order:
//  1. the first think_open, then the first think_close after it, bound the
//     think span (taken verbatim);
//  2. the first box_open after the think span starts the answer, whose JSON
//     object is brace-matched (string-aware) and must be followed by
//     box_close, whitespace allowed between;
//  3. every key must name an evaluation label (aliases folded), at most once;
//  4. every value must be a JSON number in [0,1]. Strings such as "70%" fail.
// Absent labels become 0 and are listed in missing_labels. Any violation
// throws Error(kFormat).
ReasoningTranscript parse_transcript(const std::string& raw,
                                     const TranscriptFormat& format = kDefaultFormat);

// Canonical rendering: think span, newline, box with a compact JSON object in
// evaluation-label order. Throws invalid-input if think contains the closing
// tag or the vector is not a full fourteen-label vector.
std::string render_transcript(const std::string& think, const DiagnosisVector& answer,
                              const TranscriptFormat& format = kDefaultFormat);

}  // namespace radfabric::reasoning
