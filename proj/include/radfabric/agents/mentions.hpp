#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "radfabric/agents/findings.hpp"

namespace radfabric::agents {

// Directory holding the editable lexicon and phrase tables. Honors the
// RADFABRIC_DATA_DIR environment variable, else the build-time default.
std::filesystem::path default_data_dir();

// Phrase lexicon for report mention extraction, loaded from JSON
// (see data/mention_lexicon.json).
class Lexicon {
 public:
  struct Phrase {
    std::vector<std::string> tokens;
    Pathology pathology;
  };

  static Lexicon from_json(const json& j);
  static Lexicon load(const std::filesystem::path& path);
  // data/mention_lexicon.json under default_data_dir().
  static const Lexicon& builtin();

  std::size_t window() const { return window_; }
  const std::vector<Phrase>& phrases() const { return phrases_; }
  const std::vector<std::vector<std::string>>& negation_cues() const { return negation_; }
  const std::vector<std::vector<std::string>>& uncertainty_cues() const { return uncertainty_; }
  const std::vector<std::string>& scope_breakers() const { return breakers_; }

 private:
  std::size_t window_ = 5;
  std::vector<Phrase> phrases_;  // longest first
  std::vector<std::vector<std::string>> negation_;
  std::vector<std::vector<std::string>> uncertainty_;
  std::vector<std::string> breakers_;
};

// Lowercased alphanumeric word tokens; sentence punctuation (. ; ! ?) is
// kept as a "." boundary token.
std::vector<std::string> tokenize_report(std::string_view text);

// Case-insensitive longest-match phrase lookup. A negation cue ending within
// the lexicon window before a phrase (same sentence, no scope breaker in
// between) makes it negative; otherwise an uncertainty cue makes it
// uncertain. Mentions are returned in text order.
std::vector<Mention> extract_mentions(std::string_view text, const Lexicon& lexicon);
std::vector<Mention> extract_mentions(std::string_view text);

}  // namespace radfabric::agents
