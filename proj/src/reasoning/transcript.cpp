#include "radfabric/reasoning/transcript.hpp"

#include <cctype>
#include <cmath>

namespace radfabric::reasoning {

namespace {

[[noreturn]] void format_error(const std::string& msg) { fail(ErrorKind::kFormat, msg); }

// Index one past the '}' matching the '{' at pos, or npos.
std::size_t match_object(const std::string& s, std::size_t pos) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = pos; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return i + 1;
  }
  return std::string::npos;
}

std::size_t skip_space(const std::string& s, std::size_t i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

}  // namespace

TranscriptFormat TranscriptFormat::from_json(const json& j) {
  TranscriptFormat f;
  f.think_open = j.value("think_open", f.think_open);
  f.think_close = j.value("think_close", f.think_close);
  f.box_open = j.value("box_open", f.box_open);
  f.box_close = j.value("box_close", f.box_close);
  if (f.think_open.empty() || f.think_close.empty() || f.box_open.empty()) {
    invalid_input("transcript delimiters must be nonempty");
  }
  return f;
}

json TranscriptFormat::to_json() const {
  return {{"think_open", think_open},
          {"think_close", think_close},
          {"box_open", box_open},
          {"box_close", box_close}};
}

ReasoningTranscript parse_transcript(const std::string& raw, const TranscriptFormat& format) {
  const std::size_t open = raw.find(format.think_open);
  if (open == std::string::npos) format_error("no " + format.think_open + " tag");
  const std::size_t body = open + format.think_open.size();
  const std::size_t close = raw.find(format.think_close, body);
  if (close == std::string::npos) format_error("unterminated " + format.think_open + " span");

  const std::size_t box = raw.find(format.box_open, close + format.think_close.size());
  if (box == std::string::npos) format_error("no answer box after the think span");
  const std::size_t obj = skip_space(raw, box + format.box_open.size());
  if (obj >= raw.size() || raw[obj] != '{') format_error("answer box does not hold a JSON object");
  const std::size_t obj_end = match_object(raw, obj);
  if (obj_end == std::string::npos) format_error("unbalanced braces in answer box");
  const std::size_t tail = skip_space(raw, obj_end);
  if (raw.compare(tail, format.box_close.size(), format.box_close) != 0) {
    format_error("answer box is not closed by " + format.box_close);
  }

  json parsed = json::parse(raw.begin() + static_cast<std::ptrdiff_t>(obj),
                            raw.begin() + static_cast<std::ptrdiff_t>(obj_end), nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) format_error("answer box is not a JSON object");

  ReasoningTranscript t;
  t.raw = raw;
  t.think = raw.substr(body, close - body);
  for (const auto& [key, value] : parsed.items()) {
    auto p = agents::try_parse_pathology(key);
    if (!p || !agents::is_eval_label(*p)) format_error("'" + key + "' is not an evaluation label");
    if (!value.is_number()) format_error("probability for '" + key + "' is not a number");
    const double v = value.get<double>();
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      format_error("probability for '" + key + "' lies outside [0,1]");
    }
    if (!t.answer.probabilities.emplace(*p, v).second) {
      format_error("label '" + key + "' appears twice");
    }
  }
  for (Pathology p : agents::kEvalLabels) {
    if (t.answer.probabilities.emplace(p, 0.0).second) t.missing_labels.push_back(p);
  }
  return t;
}

std::string render_transcript(const std::string& think, const DiagnosisVector& answer,
                              const TranscriptFormat& format) {
  if (think.find(format.think_close) != std::string::npos) {
    invalid_input("think text contains the closing delimiter");
  }
  answer.validate();
  // ordered_json keeps evaluation-label order rather than alphabetical.
  nlohmann::ordered_json obj = nlohmann::ordered_json::object();
  for (Pathology p : agents::kEvalLabels) obj[std::string(agents::display_name(p))] = answer.at(p);
  return format.think_open + think + format.think_close + "\n" + format.box_open + obj.dump() +
         format.box_close;
}

}  // namespace radfabric::reasoning
