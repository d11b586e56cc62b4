#include "radfabric/reasoning/prompt.hpp"

#include <cstdio>
#include <sstream>

#include "radfabric/raster/grid_io.hpp"

namespace radfabric::reasoning {

namespace {

using raster::format_real;

// Derived statistics print at four decimals; raw scores print verbatim.
std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string trim_right(const std::string& s) {
  const auto end = s.find_last_not_of(" \t\r\n");
  return end == std::string::npos ? "" : s.substr(0, end + 1);
}

void write_instructions(std::ostringstream& out, const TranscriptFormat& f) {
  out << "You are the reasoning stage of a chest radiograph diagnosis system.\n"
      << "Weigh the classifier scores, anatomical findings and report text below, "
         "noting where sources agree and where they conflict.\n"
      << "Write your step-by-step reasoning between " << f.think_open << " and "
      << f.think_close << ".\n"
      << "Then write the final answer as " << f.box_open << "{...}" << f.box_close
      << ", where {...} is a JSON object mapping each of these labels to a probability "
         "between 0 and 1:\n";
  bool first = true;
  for (Pathology p : agents::kEvalLabels) {
    out << (first ? "" : ", ") << agents::display_name(p);
    first = false;
  }
  out << "\n";
}

}  // namespace

std::string build_prompt(const EvidencePackage& pkg, const ConsistencyReport& consistency,
                         const TranscriptFormat& format) {
  std::ostringstream out;
  write_instructions(out, format);
  out << "\nStudy: " << pkg.study_id << "\n";

  out << "\n## Classifier evidence\n";
  for (const auto& e : consistency.entries) {
    const int mentions = e.positive_mentions + e.negative_mentions + e.uncertain_mentions;
    if (e.covering_agents() == 0 && mentions == 0) continue;
    out << "\n### " << agents::display_name(e.pathology) << "\n";
    for (const auto& [id, score] : e.scores) out << pkg.agent_name(id) << ": " << format_real(score) << "\n";
    if (e.covering_agents() >= 2) {
      out << "Cross-check: mean " << fixed4(e.mean) << ", spread " << fixed4(e.spread);
      if (e.contradiction) out << ", exceeds " << format_real(consistency.delta) << " (agents disagree)";
      out << "\n";
    }
    if (e.covering_agents() == 0) out << "No classifier covers this finding.\n";
    if (mentions > 0) {
      out << "Report mentions: " << e.positive_mentions << " positive, " << e.negative_mentions
          << " negative, " << e.uncertain_mentions << " uncertain\n";
    }
  }

  if (!pkg.descriptions.empty()) {
    out << "\n## Anatomical findings\n";
    for (const auto& d : pkg.descriptions) {
      out << "- " << pkg.agent_name(d.agent_id) << ", " << agents::display_name(d.pathology) << ": "
          << d.sentence;
      if (!d.heatmap_ref.empty() && d.heatmap_ref.find('\n') == std::string::npos) {
        out << " [heatmap: " << d.heatmap_ref << "]";
      }
      out << "\n";
    }
  }

  if (!pkg.reports.empty()) {
    out << "\n## Clinical reports\n";
    for (const auto& r : pkg.reports) out << "\n### " << r.agent_name << "\n" << trim_right(r.text) << "\n";
  }
  return out.str();
}

}  // namespace radfabric::reasoning
