#include "radfabric/reward/ground_truth.hpp"

#include <sstream>

#include "radfabric/error.hpp"
#include "radfabric/raster/grid_io.hpp"

namespace radfabric::reward {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Plain comma split; quoted fields are unquoted but may not contain commas.
std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    cell = trim(cell);
    if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

Label parse_cell(const std::string& cell, std::size_t line_no) {
  if (cell.empty()) return Label::kUnlabeled;
  if (cell == "1" || cell == "1.0") return Label::kPresent;
  if (cell == "0" || cell == "0.0" || cell == "-0") return Label::kAbsent;
  if (cell == "-1" || cell == "-1.0") return Label::kUncertain;
  fail(ErrorKind::kFormat,
       "ground truth line " + std::to_string(line_no) + ": bad label cell '" + cell + "'");
}

}  // namespace

Label GroundTruth::at(Pathology p) const {
  auto it = labels.find(p);
  return it == labels.end() ? Label::kUnlabeled : it->second;
}

bool GroundTruth::is_labeled(Pathology p) const {
  const Label l = at(p);
  return l == Label::kPresent || l == Label::kAbsent;
}

GroundTruthSet parse_ground_truth_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<Pathology> columns;
  bool have_header = false;
  GroundTruthSet set;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_row(line);
    if (!have_header) {
      if (cells.empty() || cells[0] != "study_id") {
        fail(ErrorKind::kFormat, "ground truth header must start with study_id");
      }
      for (std::size_t i = 1; i < cells.size(); ++i) {
        auto p = agents::try_parse_pathology(cells[i]);
        if (!p || !agents::is_eval_label(*p)) {
          fail(ErrorKind::kFormat, "ground truth column '" + cells[i] + "' is not an evaluation label");
        }
        for (Pathology q : columns) {
          if (q == *p) fail(ErrorKind::kFormat, "ground truth column '" + cells[i] + "' repeats");
        }
        columns.push_back(*p);
      }
      have_header = true;
      continue;
    }
    if (cells.size() > columns.size() + 1) {
      fail(ErrorKind::kFormat, "ground truth line " + std::to_string(line_no) + " has too many cells");
    }
    GroundTruth gt;
    gt.study_id = cells[0];
    if (gt.study_id.empty()) fail(ErrorKind::kFormat, "ground truth line " + std::to_string(line_no) + " has no study id");
    for (std::size_t i = 1; i < cells.size(); ++i) {
      const Label l = parse_cell(cells[i], line_no);
      if (l != Label::kUnlabeled) gt.labels[columns[i - 1]] = l;
    }
    if (!set.emplace(gt.study_id, gt).second) {
      fail(ErrorKind::kFormat, "ground truth repeats study '" + gt.study_id + "'");
    }
  }
  if (!have_header) fail(ErrorKind::kFormat, "ground truth file is empty");
  return set;
}

GroundTruthSet load_ground_truth_csv(const std::filesystem::path& path) {
  return parse_ground_truth_csv(raster::read_text_file(path));
}

std::string format_ground_truth_csv(const GroundTruthSet& set) {
  std::string out = "study_id";
  for (Pathology p : agents::kEvalLabels) out += "," + std::string(agents::display_name(p));
  out += "\n";
  for (const auto& [id, gt] : set) {
    out += id;
    for (Pathology p : agents::kEvalLabels) {
      out += ",";
      switch (gt.at(p)) {
        case Label::kPresent: out += "1"; break;
        case Label::kAbsent: out += "0"; break;
        case Label::kUncertain: out += "-1"; break;
        case Label::kUnlabeled: break;
      }
    }
    out += "\n";
  }
  return out;
}

}  // namespace radfabric::reward
