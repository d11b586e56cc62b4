#include "radfabric/reward/reward.hpp"

#include <cmath>

#include "radfabric/error.hpp"

namespace radfabric::reward {

void RewardConfig::validate() const {
  if (format_weight < 0.0 || accuracy_weight < 0.0 ||
      std::abs(format_weight + accuracy_weight - 1.0) > 1e-12) {
    invalid_input("reward weights must be nonnegative and sum to 1");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) invalid_input("threshold must lie in (0,1)");
}

RewardConfig RewardConfig::from_json(const nlohmann::json& j) {
  RewardConfig c;
  c.format_weight = j.value("format_weight", c.format_weight);
  c.accuracy_weight = j.value("accuracy_weight", c.accuracy_weight);
  c.threshold = j.value("threshold", c.threshold);
  if (j.contains("transcript_format")) c.format = TranscriptFormat::from_json(j["transcript_format"]);
  c.validate();
  return c;
}

nlohmann::json RewardConfig::to_json() const {
  return {{"format_weight", format_weight},
          {"accuracy_weight", accuracy_weight},
          {"threshold", threshold},
          {"transcript_format", format.to_json()}};
}

int format_reward(const std::string& raw, const TranscriptFormat& format) {
  try {
    reasoning::parse_transcript(raw, format);
    return 1;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kFormat) throw;
    return 0;
  }
}

AccuracyResult score_accuracy(const DiagnosisVector& pred, const GroundTruth& gt, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) invalid_input("threshold must lie in (0,1)");
  AccuracyResult r;
  for (Pathology p : agents::kEvalLabels) {
    if (!gt.is_labeled(p)) continue;
    ++r.labeled;
    const bool predicted = pred.at(p) >= threshold;
    const bool truth = gt.at(p) == Label::kPresent;
    if (predicted == truth) ++r.matched;
  }
  if (r.labeled == 0) {
    r.no_labels = true;
    return r;
  }
  r.accuracy = static_cast<double>(r.matched) / static_cast<double>(r.labeled);
  return r;
}

double accuracy_reward(const DiagnosisVector& pred, const GroundTruth& gt, double threshold) {
  return score_accuracy(pred, gt, threshold).accuracy;
}

RewardBreakdown total_reward(const std::string& raw, const GroundTruth& gt, const RewardConfig& config) {
  config.validate();
  RewardBreakdown b;
  b.format_weight = config.format_weight;
  b.accuracy_weight = config.accuracy_weight;
  try {
    const auto t = reasoning::parse_transcript(raw, config.format);
    b.format = 1;
    const auto acc = score_accuracy(t.answer, gt, config.threshold);
    b.accuracy = acc.accuracy;
    b.labeled = acc.labeled;
    b.matched = acc.matched;
    b.no_labels = acc.no_labels;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kFormat) throw;
    b.format_error = e.what();
  }
  b.total = b.format_weight * b.format + b.accuracy_weight * b.accuracy;
  return b;
}

nlohmann::json to_json(const RewardBreakdown& r) {
  nlohmann::json j = {{"format", r.format},
                      {"accuracy", r.accuracy},
                      {"total", r.total},
                      {"weights", {r.format_weight, r.accuracy_weight}},
                      {"labeled", r.labeled},
                      {"matched", r.matched}};
  if (r.no_labels) j["warning"] = "no labeled pathologies";
  if (!r.format_error.empty()) j["format_error"] = r.format_error;
  return j;
}

std::vector<double> group_advantage(const std::vector<double>& rewards, double epsilon) {
  if (rewards.size() < 2) invalid_input("group advantage needs at least two rewards");
  if (!(epsilon > 0.0)) invalid_input("epsilon must be positive");
  const double n = static_cast<double>(rewards.size());
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= n;
  // Second-pass correction of the mean. Identical rewards then give
  // r - mean == 0 exactly instead of a rounding residue.
  double residual = 0.0;
  for (double r : rewards) residual += r - mean;
  mean += residual / n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double denom = std::sqrt(var / n) + epsilon;
  std::vector<double> out;
  out.reserve(rewards.size());
  for (double r : rewards) out.push_back((r - mean) / denom);
  return out;
}

}  // namespace radfabric::reward
