#include "radfabric/agents/mentions.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>

#include "radfabric/error.hpp"

namespace radfabric::agents {

namespace {

const std::string kBoundary = ".";

std::vector<std::string> split_phrase(const std::string& phrase) {
  auto tokens = tokenize_report(phrase);
  tokens.erase(std::remove(tokens.begin(), tokens.end(), kBoundary), tokens.end());
  return tokens;
}

std::vector<std::vector<std::string>> load_cues(const json& j, const char* key) {
  std::vector<std::vector<std::string>> out;
  for (const auto& cue : j.value(key, json::array())) {
    auto tokens = split_phrase(cue.get<std::string>());
    if (!tokens.empty()) out.push_back(std::move(tokens));
  }
  return out;
}

bool matches_at(const std::vector<std::string>& tokens, std::size_t pos,
                const std::vector<std::string>& pattern) {
  if (pos + pattern.size() > tokens.size()) return false;
  return std::equal(pattern.begin(), pattern.end(), tokens.begin() + static_cast<std::ptrdiff_t>(pos));
}

// True when some cue ends at most `window` tokens before `phrase_start`
// with no boundary or scope breaker in between.
bool cue_in_window(const std::vector<std::string>& tokens, std::size_t phrase_start,
                   std::size_t window, const std::vector<std::vector<std::string>>& cues,
                   const std::vector<std::string>& breakers) {
  for (std::size_t dist = 1; dist <= window && dist <= phrase_start; ++dist) {
    const std::size_t end = phrase_start - dist;  // last token of the cue
    const std::string& tok = tokens[end];
    if (tok == kBoundary) return false;
    for (const auto& cue : cues) {
      if (cue.size() > end + 1) continue;
      if (matches_at(tokens, end + 1 - cue.size(), cue)) return true;
    }
    if (std::find(breakers.begin(), breakers.end(), tok) != breakers.end()) return false;
  }
  return false;
}

}  // namespace

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("RADFABRIC_DATA_DIR"); env && *env) return env;
  return RADFABRIC_DEFAULT_DATA_DIR;
}

std::vector<std::string> tokenize_report(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      current.push_back(static_cast<char>(std::tolower(u)));
      continue;
    }
    flush();
    if (c == '.' || c == ';' || c == '!' || c == '?') {
      if (tokens.empty() || tokens.back() != kBoundary) tokens.push_back(kBoundary);
    }
  }
  flush();
  return tokens;
}

Lexicon Lexicon::from_json(const json& j) {
  if (!j.is_object() || !j.contains("phrases")) {
    invalid_input("lexicon must be an object with a 'phrases' table");
  }
  Lexicon lex;
  lex.window_ = j.value("negation_window", 5u);
  lex.negation_ = load_cues(j, "negation_cues");
  lex.uncertainty_ = load_cues(j, "uncertainty_cues");
  for (const auto& b : j.value("scope_breakers", json::array())) {
    lex.breakers_.push_back(b.get<std::string>());
  }
  for (const auto& [label, phrases] : j["phrases"].items()) {
    const Pathology p = parse_pathology(label);
    for (const auto& phrase : phrases) {
      auto tokens = split_phrase(phrase.get<std::string>());
      if (tokens.empty()) continue;
      lex.phrases_.push_back({std::move(tokens), p});
    }
  }
  std::stable_sort(lex.phrases_.begin(), lex.phrases_.end(),
                   [](const Phrase& a, const Phrase& b) {
                     return a.tokens.size() > b.tokens.size();
                   });
  return lex;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kNotFound, "cannot open lexicon '" + path.string() + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::kFormat, "lexicon '" + path.string() + "' is not valid JSON");
  return from_json(j);
}

const Lexicon& Lexicon::builtin() {
  static const Lexicon lexicon = load(default_data_dir() / "mention_lexicon.json");
  return lexicon;
}

std::vector<Mention> extract_mentions(std::string_view text, const Lexicon& lexicon) {
  const auto tokens = tokenize_report(text);
  std::vector<Mention> mentions;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const Lexicon::Phrase* hit = nullptr;
    for (const auto& phrase : lexicon.phrases()) {
      if (matches_at(tokens, i, phrase.tokens)) {
        hit = &phrase;
        break;
      }
    }
    if (!hit) {
      ++i;
      continue;
    }
    Polarity polarity = Polarity::kPositive;
    if (cue_in_window(tokens, i, lexicon.window(), lexicon.negation_cues(),
                      lexicon.scope_breakers())) {
      polarity = Polarity::kNegative;
    } else if (cue_in_window(tokens, i, lexicon.window(), lexicon.uncertainty_cues(),
                             lexicon.scope_breakers())) {
      polarity = Polarity::kUncertain;
    }
    mentions.push_back({hit->pathology, polarity});
    i += hit->tokens.size();
  }
  return mentions;
}

std::vector<Mention> extract_mentions(std::string_view text) {
  return extract_mentions(text, Lexicon::builtin());
}

}  // namespace radfabric::agents
