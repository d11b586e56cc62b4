#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "radfabric/reasoning/transcript.hpp"
#include "radfabric/reward/ground_truth.hpp"

namespace radfabric::reward {

using reasoning::DiagnosisVector;
using reasoning::TranscriptFormat;

struct RewardConfig {
  double format_weight = 0.1;
  double accuracy_weight = 0.9;
  double threshold = 0.5;  // probability >= threshold counts as present
  TranscriptFormat format;

  // Throws invalid-input unless both weights are nonnegative and sum to 1 and
  // threshold lies in (0,1).
  void validate() const;
  static RewardConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Current version of the format rules (see parse_transcript).
inline constexpr int kFormatRulesVersion = 1;

int format_reward(const std::string& raw, const TranscriptFormat& format = reasoning::kDefaultFormat);

struct AccuracyResult {
  double accuracy = 0.0;
  int labeled = 0;
  int matched = 0;
  bool no_labels = false;  // warning: nothing to score against
};

// Binarizes pred at threshold and scores matches over gt's present/absent
// labels only.
AccuracyResult score_accuracy(const DiagnosisVector& pred, const GroundTruth& gt, double threshold);
double accuracy_reward(const DiagnosisVector& pred, const GroundTruth& gt, double threshold = 0.5);

struct RewardBreakdown {
  int format = 0;
  double accuracy = 0.0;
  double total = 0.0;
  double format_weight = 0.1;
  double accuracy_weight = 0.9;
  int labeled = 0;
  int matched = 0;
  bool no_labels = false;
  std::string format_error;  // parser message when format == 0
};

// An unparsable transcript scores zero accuracy.
RewardBreakdown total_reward(const std::string& raw, const GroundTruth& gt,
                             const RewardConfig& config = {});

nlohmann::json to_json(const RewardBreakdown& r);

// (r_i - mean) / (population std + epsilon).
std::vector<double> group_advantage(const std::vector<double>& rewards, double epsilon = 1e-8);

}  // namespace radfabric::reward
