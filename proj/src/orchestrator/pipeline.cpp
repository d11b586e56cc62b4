#include "radfabric/orchestrator/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <functional>
#include <future>

#include "radfabric/agents/backends.hpp"
#include "radfabric/anatomy/correlate.hpp"
#include "radfabric/raster/grid_io.hpp"
#include "radfabric/reasoning/prompt.hpp"

namespace radfabric::orchestrator {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

StageError stage_error(const std::string& stage, const std::exception& e) {
  std::string kind = "internal";
  if (const auto* err = dynamic_cast<const Error*>(&e)) kind = std::string(to_string(err->kind()));
  return {stage, kind, e.what()};
}

template <typename T>
struct Outcome {
  std::optional<T> value;
  std::optional<StageError> error;
};

// Runs the jobs concurrently (or in order when serial); results keep job order.
template <typename T>
std::vector<Outcome<T>> fan_out(std::vector<std::pair<std::string, std::function<T()>>> jobs, bool serial) {
  auto run = [](const std::pair<std::string, std::function<T()>>& job) {
    Outcome<T> o;
    try {
      o.value = job.second();
    } catch (const std::exception& e) {
      o.error = stage_error(job.first, e);
    }
    return o;
  };
  std::vector<Outcome<T>> out;
  if (serial) {
    for (const auto& job : jobs) out.push_back(run(job));
    return out;
  }
  std::vector<std::future<Outcome<T>>> futures;
  for (const auto& job : jobs) futures.push_back(std::async(std::launch::async, run, job));
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

void run_anatomy(const PipelineConfig& config, const StudyInputs& inputs,
                 const agents::FixtureStore& store, StudyRecord& rec) {
  if (!inputs.mask) {
    rec.flags.push_back("no-anatomy");
    return;
  }
  raster::SegmentationMask mask;
  try {
    mask = anatomy::ensure_partitioned(raster::read_mask(*inputs.mask));
  } catch (const std::exception& e) {
    rec.errors.push_back(stage_error("anatomy", e));
    rec.flags.push_back("no-anatomy");
    return;
  }
  const fs::path base = store.study_dir(rec.study_id);
  for (const auto& f : rec.finding_sets) {
    for (const auto& [p, ref] : f.heatmaps) {
      try {
        raster::Heatmap h = agents::load_heatmap_ref(ref, base);
        if (h.width() != mask.width() || h.height() != mask.height()) {
          h = raster::Heatmap(raster::upsample_bilinear(h.grid(), mask.width(), mask.height()));
        }
        AnatomyEntry e;
        e.agent_id = f.agent_id;
        e.pathology = p;
        e.heatmap_ref = ref.find('\n') == std::string::npos ? ref : "inline";
        e.correlation = anatomy::correlate(h, mask, config.tau);
        if (e.correlation.has_activation()) {
          auto d = anatomy::describe(p, e.correlation);
          d.agent_id = f.agent_id;
          d.heatmap_ref = e.heatmap_ref;
          e.description = std::move(d);
        }
        rec.anatomy.push_back(std::move(e));
      } catch (const std::exception& ex) {
        rec.errors.push_back(stage_error("anatomy", ex));
      }
    }
  }
}

void run_reasoning(const PipelineConfig& config, StudyRecord& rec) {
  std::vector<anatomy::AnatomicalDescription> descriptions;
  for (const auto& a : rec.anatomy) {
    if (a.description) descriptions.push_back(*a.description);
  }
  std::map<int, std::string> names;
  for (const auto& a : config.agents) names[a.id] = a.name;

  reasoning::EvidencePackage pkg;
  reasoning::ConsistencyReport consistency;
  try {
    pkg = reasoning::assemble_evidence(rec.finding_sets, std::move(descriptions), rec.reports, names);
    consistency = reasoning::cross_validate(pkg, config.delta);
    rec.prompt = reasoning::build_prompt(pkg, consistency, config.reward.format);
  } catch (const std::exception& e) {
    rec.errors.push_back(stage_error("reasoning", e));
    rec.failed = true;
    return;
  }

  if (config.reasoner) {
    try {
      const std::string raw = reasoning::query_reasoner(rec.prompt, *config.reasoner);
      rec.transcript = reasoning::parse_transcript(raw, config.reward.format);
      rec.decision = DecisionSource::kTranscript;
      return;
    } catch (const std::exception& e) {
      rec.errors.push_back(stage_error("reasoner", e));
      if (!config.fallback) {
        rec.failed = true;
        return;
      }
      rec.flags.push_back("reasoner-fallback");
    }
  }
  rec.fallback = reasoning::fuse_deterministic(pkg, consistency);
  rec.decision = DecisionSource::kFallback;
}

}  // namespace

StudyInputs default_inputs(const PipelineConfig& config, const std::string& study_id) {
  StudyInputs in;
  in.study_id = study_id;
  const fs::path mask = agents::FixtureStore(config.fixtures_root).study_dir(study_id) / "mask.grid";
  if (fs::is_regular_file(mask)) in.mask = mask;
  return in;
}

StudyRecord run_study(const PipelineConfig& config, const StudyInputs& inputs, bool persist) {
  StudyRecord rec;
  rec.study_id = inputs.study_id;
  rec.started_at = utc_now();
  rec.config_hash = config.hash;
  rec.inputs = {{"image", inputs.image},
                {"mask", inputs.mask ? json(inputs.mask->generic_string()) : json(nullptr)},
                {"fixtures", config.fixtures_root.generic_string()}};
  for (const auto& a : config.agents) rec.agent_backends[a.id] = agents::backend_name(a.backend);

  const agents::FixtureStore store(config.fixtures_root);
  agents::AgentContext ctx;
  ctx.fixtures = &store;
  ctx.remote_timeout = config.remote_timeout;

  std::vector<std::pair<std::string, std::function<agents::AgentFindingSet()>>> cxr_jobs;
  for (const auto* spec : config.cxr_agents()) {
    cxr_jobs.emplace_back("agent " + std::to_string(spec->id) + " (" + spec->name + ")",
                          [spec, &inputs, &ctx] {
                            return agents::run_cxr_agent(*spec, inputs.study_id, inputs.image, ctx);
                          });
  }
  std::vector<std::pair<std::string, std::function<agents::ClinicalReport()>>> report_jobs;
  for (const auto* spec : config.report_agents()) {
    report_jobs.emplace_back("report " + spec->name, [spec, &inputs, &ctx] {
      return agents::run_report_agent(*spec, inputs.study_id, inputs.image, ctx);
    });
  }
  // Both groups start before either is awaited.
  auto reports_future = std::async(config.serial ? std::launch::deferred : std::launch::async,
                                   [&] { return fan_out(std::move(report_jobs), config.serial); });
  auto cxr = fan_out(std::move(cxr_jobs), config.serial);
  auto reports = reports_future.get();

  for (auto& o : cxr) {
    if (o.value) rec.finding_sets.push_back(std::move(*o.value));
    else rec.errors.push_back(*o.error);
  }
  for (auto& o : reports) {
    if (o.value) rec.reports.push_back(std::move(*o.value));
    else rec.errors.push_back(*o.error);
  }
  std::sort(rec.finding_sets.begin(), rec.finding_sets.end(),
            [](const auto& a, const auto& b) { return a.agent_id < b.agent_id; });
  std::sort(rec.reports.begin(), rec.reports.end(),
            [](const auto& a, const auto& b) { return a.agent_name < b.agent_name; });
  if (!rec.errors.empty()) rec.failed = true;

  const std::size_t before = rec.errors.size();
  run_anatomy(config, inputs, store, rec);
  if (rec.errors.size() != before) rec.failed = true;

  run_reasoning(config, rec);
  rec.finished_at = utc_now();

  if (persist) {
    raster::write_text_file(config.out_dir / (rec.study_id + ".json"), serialize(rec));
  }
  return rec;
}

std::vector<StudyRecord> run_dataset(const PipelineConfig& config, const Manifest& manifest, bool persist) {
  std::vector<std::pair<std::string, std::function<StudyRecord()>>> jobs;
  for (const auto& s : manifest.studies) {
    jobs.emplace_back("study " + s.study_id, [&config, &s, persist] { return run_study(config, s, persist); });
  }
  std::vector<StudyRecord> out;
  for (auto& o : fan_out(std::move(jobs), config.serial)) {
    if (!o.value) fail(ErrorKind::kIo, o.error->message);
    out.push_back(std::move(*o.value));
  }
  return out;
}

}  // namespace radfabric::orchestrator
