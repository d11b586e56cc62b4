#pragma once

#include <filesystem>
#include <vector>

#include "radfabric/orchestrator/config.hpp"
#include "radfabric/orchestrator/study_record.hpp"

namespace radfabric::orchestrator {

// Inputs for a study in the configured fixture tree; picks up
// <study>/mask.grid when present.
StudyInputs default_inputs(const PipelineConfig& config, const std::string& study_id);

// Agents (concurrently unless config.serial), then anatomy over every
// returned heatmap, then reasoning. Stage failures are recorded in the
// record rather than thrown. Writes <out_dir>/<study_id>.json when persist.
StudyRecord run_study(const PipelineConfig& config, const StudyInputs& inputs, bool persist = true);

// Runs every manifest study. Result order follows the manifest.
std::vector<StudyRecord> run_dataset(const PipelineConfig& config, const Manifest& manifest,
                                     bool persist = true);

}  // namespace radfabric::orchestrator
