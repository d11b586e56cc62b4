#pragma once

#include <string>
#include <vector>

#include "radfabric/orchestrator/study_record.hpp"
#include "radfabric/reward/ground_truth.hpp"

namespace radfabric::orchestrator {

struct EvalCell {
  agents::Pathology pathology{};
  int correct = 0;
  int total = 0;  // studies with a present/absent label

  // 0 when total is 0; check total before reading.
  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / total; }
};

struct EvalTable {
  double threshold = 0.5;
  std::vector<EvalCell> cells;  // evaluation-label order
  double macro = 0.0;           // mean over cells with total > 0
  double micro = 0.0;           // pooled correct / pooled total
  int pooled_correct = 0;
  int pooled_total = 0;
  int studies = 0;              // records scored
  int skipped_no_truth = 0;
  int skipped_no_decision = 0;
  int duplicates = 0;           // repeated study ids, first record kept

  const EvalCell& at(agents::Pathology p) const;
  bool operator==(const EvalTable& o) const;
};

// Binarizes each record's decision vector at threshold and scores it against
// the matching truth row.
EvalTable evaluate(const std::vector<StudyRecord>& records, const reward::GroundTruthSet& gt,
                   double threshold = 0.5);

// Two blocks of seven label columns in evaluation-table order; the second
// block ends with the macro and micro overall columns. Cells print three
// decimals, "-" where no study is labeled.
std::string render_table(const EvalTable& t, const std::string& row_name = "pipeline");

json to_json(const EvalTable& t);

}  // namespace radfabric::orchestrator
