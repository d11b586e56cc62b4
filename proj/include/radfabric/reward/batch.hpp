#pragma once

#include <string>

#include "radfabric/reward/reward.hpp"

namespace radfabric::reward {

// Scores a JSONL stream of {study_id, transcript, ...} records, one output
// line per input line in the same order. A study absent from gt is scored as
// fully unlabeled and carries a "no ground truth" warning.
std::string score_batch(const std::string& jsonl, const GroundTruthSet& gt,
                        const RewardConfig& config = {});

}  // namespace radfabric::reward
