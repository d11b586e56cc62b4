#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "radfabric/orchestrator/config.hpp"

namespace radfabric::orchestrator {

struct FixtureIssue {
  std::filesystem::path file;
  std::string message;
};

struct FixtureReport {
  int studies = 0;
  int files_checked = 0;
  std::vector<FixtureIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Checks every study directory under dir (or those a manifest lists):
// finding sets parse, are byte-identical to their canonical serialization,
// stay within the configured agent's coverage, and reference loadable
// heatmaps; masks parse; report texts are nonempty.
FixtureReport validate_fixtures(const std::filesystem::path& dir, const PipelineConfig& config);

}  // namespace radfabric::orchestrator
