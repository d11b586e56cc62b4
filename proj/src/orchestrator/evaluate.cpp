#include "radfabric/orchestrator/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "radfabric/error.hpp"

namespace radfabric::orchestrator {

const EvalCell& EvalTable::at(agents::Pathology p) const {
  for (const auto& c : cells) {
    if (c.pathology == p) return c;
  }
  invalid_input(std::string(agents::display_name(p)) + " is not an evaluation column");
}

bool EvalTable::operator==(const EvalTable& o) const {
  if (cells.size() != o.cells.size()) return false;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].pathology != o.cells[i].pathology || cells[i].correct != o.cells[i].correct ||
        cells[i].total != o.cells[i].total) {
      return false;
    }
  }
  return threshold == o.threshold && macro == o.macro && micro == o.micro &&
         pooled_correct == o.pooled_correct && pooled_total == o.pooled_total &&
         studies == o.studies && skipped_no_truth == o.skipped_no_truth &&
         skipped_no_decision == o.skipped_no_decision && duplicates == o.duplicates;
}

EvalTable evaluate(const std::vector<StudyRecord>& records, const reward::GroundTruthSet& gt,
                   double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) invalid_input("threshold must lie in (0,1)");
  EvalTable t;
  t.threshold = threshold;
  for (auto p : agents::kEvalLabels) t.cells.push_back({p, 0, 0});

  std::set<std::string> seen;
  for (const auto& r : records) {
    if (!seen.insert(r.study_id).second) {
      ++t.duplicates;
      continue;
    }
    const auto* pred = r.diagnosis();
    if (!pred) {
      ++t.skipped_no_decision;
      continue;
    }
    auto truth = gt.find(r.study_id);
    if (truth == gt.end()) {
      ++t.skipped_no_truth;
      continue;
    }
    ++t.studies;
    for (auto& c : t.cells) {
      if (!truth->second.is_labeled(c.pathology)) continue;
      ++c.total;
      const bool predicted = pred->at(c.pathology) >= threshold;
      if (predicted == (truth->second.at(c.pathology) == reward::Label::kPresent)) ++c.correct;
    }
  }

  int scored_columns = 0;
  double sum = 0.0;
  for (const auto& c : t.cells) {
    t.pooled_correct += c.correct;
    t.pooled_total += c.total;
    if (c.total > 0) {
      ++scored_columns;
      sum += c.accuracy();
    }
  }
  t.macro = scored_columns == 0 ? 0.0 : sum / scored_columns;
  t.micro = t.pooled_total == 0 ? 0.0 : static_cast<double>(t.pooled_correct) / t.pooled_total;
  return t;
}

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

void render_block(std::string& out, const std::vector<std::string>& header,
                  const std::vector<std::string>& row, const std::vector<std::string>& counts,
                  const std::string& row_name) {
  std::vector<std::size_t> widths;
  std::size_t first = std::max<std::size_t>({row_name.size(), 6, std::string("Agents").size()});
  for (std::size_t i = 0; i < header.size(); ++i) {
    widths.push_back(std::max({header[i].size(), row[i].size(), counts[i].size()}));
  }
  auto line = [&](const std::string& name, const std::vector<std::string>& cells) {
    std::string l = pad(name, first);
    for (std::size_t i = 0; i < cells.size(); ++i) l += " | " + pad(cells[i], widths[i]);
    while (!l.empty() && l.back() == ' ') l.pop_back();
    out += l + "\n";
  };
  line("Agents", header);
  std::size_t total = first;
  for (auto w : widths) total += 3 + w;
  out += std::string(total, '-') + "\n";
  line(row_name, row);
  line("n", counts);
}

}  // namespace

std::string render_table(const EvalTable& t, const std::string& row_name) {
  std::string out;
  for (std::size_t block = 0; block < 2; ++block) {
    std::vector<std::string> header, row, counts;
    for (std::size_t i = block * 7; i < block * 7 + 7 && i < t.cells.size(); ++i) {
      const auto& c = t.cells[i];
      header.emplace_back(agents::display_name(c.pathology));
      row.push_back(c.total == 0 ? "-" : fixed3(c.accuracy()));
      counts.push_back(std::to_string(c.total));
    }
    if (block == 1) {
      header.emplace_back("Overall (macro)");
      row.push_back(fixed3(t.macro));
      counts.emplace_back("");
      header.emplace_back("Overall (micro)");
      row.push_back(fixed3(t.micro));
      counts.push_back(std::to_string(t.pooled_total));
    }
    if (block == 1) out += "\n";
    render_block(out, header, row, counts, row_name);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "\nthreshold %s; %d studies scored; skipped: %d without truth, %d without decision; "
                "%d duplicates\n",
                fixed3(t.threshold).c_str(), t.studies, t.skipped_no_truth, t.skipped_no_decision,
                t.duplicates);
  out += buf;
  return out;
}

json to_json(const EvalTable& t) {
  json cells = json::array();
  for (const auto& c : t.cells) {
    cells.push_back({{"pathology", agents::display_name(c.pathology)},
                     {"correct", c.correct},
                     {"total", c.total},
                     {"accuracy", c.total == 0 ? json(nullptr) : json(c.accuracy())}});
  }
  return {{"threshold", t.threshold},
          {"cells", cells},
          {"macro", t.macro},
          {"micro", t.micro},
          {"pooled_correct", t.pooled_correct},
          {"pooled_total", t.pooled_total},
          {"studies", t.studies},
          {"skipped_no_truth", t.skipped_no_truth},
          {"skipped_no_decision", t.skipped_no_decision},
          {"duplicates", t.duplicates}};
}

}  // namespace radfabric::orchestrator
