#include "radfabric/reward/batch.hpp"

#include <sstream>

#include "radfabric/error.hpp"

namespace radfabric::reward {

std::string score_batch(const std::string& jsonl, const GroundTruthSet& gt, const RewardConfig& config) {
  std::istringstream in(jsonl);
  std::string line;
  std::string out;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object() || !rec.contains("study_id") ||
        !rec["study_id"].is_string() || !rec.contains("transcript") || !rec["transcript"].is_string()) {
      fail(ErrorKind::kFormat, "transcripts line " + std::to_string(line_no) +
                                   " is not a {study_id, transcript} record");
    }
    const std::string id = rec["study_id"].get<std::string>();
    GroundTruth empty;
    empty.study_id = id;
    auto it = gt.find(id);
    const RewardBreakdown b = total_reward(rec["transcript"].get<std::string>(),
                                           it == gt.end() ? empty : it->second, config);
    nlohmann::json j = to_json(b);
    j["study_id"] = id;
    if (it == gt.end()) j["warning"] = "no ground truth";
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace radfabric::reward
